#pragma once

// The scalar function f(t) = ((1 - |e^{-r lambda t}|) / |1 - e^{-r lambda t}|)^2
// whose infimum over t > 0, (Re lambda / |lambda|)^2, sets the sharp constant
// of the shear perturbation bound.

#include <span>
#include <vector>

#include "spirallab/types.hpp"

namespace spirallab {

struct SharpParams {
  Complex lambda;
  int r = 1;

  SharpParams(Complex lambda, int r);
  double a() const { return lambda.real(); }
  double b() const { return lambda.imag(); }
  /// (a / |lambda|)^2, the limit of f at 0+.
  double limit() const;
};

double f_sharp(const SharpParams& p, double t);

/// (1 - |e^{-r lambda t}|) - |1 - e^{-r lambda t}| a / |lambda|.
double cor_margin(const SharpParams& p, double t);

/// n log-spaced points in [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t n);

struct InfimumResult {
  double infimum;       ///< the limit when the grid never goes below it
  double grid_minimum;  ///< refined minimum over the sampled t
  double argmin;
  double limit;
  double t_min, t_max;
  std::size_t grid_points;
};

/// Minimum of f over a log grid on [1e-6 / (r |lambda|), t_max], refined by
/// golden-section search around the best cell.
InfimumResult infimum_f(const SharpParams& p, double t_max, std::size_t grid_points = 10'000);

struct CorReport {
  double min_margin;
  double argmin;
  double max_abs_margin;
  bool strictly_positive;
  bool identically_zero;
  std::size_t points;
};

CorReport verify_cor_inequality(const SharpParams& p, std::span<const double> t_grid);

struct CriticalPoint {
  double t;
  double f_value;
  double displayed_value;  ///< a^2/(a^2+b^2) + b^2(1-E)^2 / (a^2(1+E)^2 + b^2(1-E)^2)
  double exact_value;      ///< (a^2(1+E)^2 + b^2(1-E)^2) / ((a^2+b^2)(1+E)^2)
  bool stationary;         ///< f' changes sign at t
};

/// Residual cos(b r t) - (a^2(1+E)^2 - b^2(1-E)^2) / (a^2(1+E)^2 + b^2(1-E)^2),
/// E = e^{-a r t}.
double critical_residual(const SharpParams& p, double t);

/// Roots of critical_residual in [lo, hi] by bisection on sign changes of a
/// scan with `scan_points` cells. Throws no_roots when b = 0 or none exist.
std::vector<CriticalPoint> critical_points(const SharpParams& p, double lo, double hi,
                                           std::size_t scan_points = 20'000);

}  // namespace spirallab

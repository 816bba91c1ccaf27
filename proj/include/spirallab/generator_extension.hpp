#pragma once

// Extension of a disk generator f to the ball:
//   f^(x, y) = (f(x) + Q(y), (1/r)(f'(x) + r lambda - (mu - f'(x))/f(x) Q(y)) y),
// together with the conjugating map H~ whose linearization it is.

#include <span>
#include <vector>

#include "spirallab/extensions.hpp"
#include "spirallab/semigroups.hpp"

namespace spirallab {

class ExtendedGenerator {
 public:
  /// Validates deg Q = r, m and sup_{||y||=1} |Q(y)| <= r Re(lambda)/4
  /// (estimated with `sup_samples` sphere samples); throws
  /// hypothesis_violated otherwise.
  ExtendedGenerator(Generator base, Complex lambda, BallSpace space, HomogeneousPolynomial q,
                    double singularity_radius = 1e-4, long sup_samples = 100'000);

  const Generator& base() const noexcept { return base_; }
  Complex lambda() const noexcept { return lambda_; }
  const BallSpace& space() const noexcept { return space_; }
  const HomogeneousPolynomial& q() const noexcept { return q_; }
  double singularity_radius() const noexcept { return eps_; }
  int r() const noexcept { return static_cast<int>(space_.r); }

  double q_sup() const noexcept { return q_sup_; }
  /// r Re(lambda) / 4.
  double generator_bound() const;
  /// (1/4) Re(lambda)/|lambda|, the bound on the shear polynomial of H~.
  double shear_bound() const;
  /// sup |Q| / (r |lambda|), the sup of the shear polynomial -Q/(r lambda).
  double shear_sup() const;
  /// True when the shear polynomial sits within 1% of its sharp bound.
  bool near_shear_bound() const { return shear_sup() >= 0.99 * shear_bound(); }

 private:
  Generator base_;
  Complex lambda_;
  BallSpace space_;
  HomogeneousPolynomial q_;
  double eps_;
  double q_sup_ = 0.0;
};

BallPoint extend_generator(const ExtendedGenerator& g, const BallPoint& p);

/// (h(x) - h'(x) Q(y) / (r lambda), h'(x)^{1/r} y).
BallPoint h_tilde(const ExtendedGenerator& g, const UnivalentMap& h, const BallPoint& p);

/// (mu z, (lambda + mu/r) w).
BallPoint linear_generator(const ExtendedGenerator& g, const BallPoint& zw);

/// Jacobian of H~ at p as a (1+m) x (1+m) matrix, from h', h'', Q and Q'.
CMat dh_tilde(const ExtendedGenerator& g, const UnivalentMap& h, const BallPoint& p);

/// Exact block inverse of dh_tilde (uses Euler's identity Q'(y) y = r Q(y)).
CMat dh_tilde_inverse(const ExtendedGenerator& g, const UnivalentMap& h, const BallPoint& p);

/// || DH~ DH~^{-1} - I || (max absolute entry).
double dh_tilde_identity_residual(const ExtendedGenerator& g, const UnivalentMap& h,
                                  const BallPoint& p);

/// max over samples of || DH~(p) f^(p) - f~(H~(p)) ||.
double conjugation_residual(const ExtendedGenerator& g, const UnivalentMap& h,
                            std::span<const BallPoint> samples);

struct BallTrajectory {
  std::vector<double> times;
  std::vector<BallPoint> points;
  BallPoint endpoint;
  bool exited = false;
  double exit_time = 0.0;
  double max_gauge = 0.0;
  long steps = 0;
};

/// Integrates d(x, y)/dt = -f^(x, y) over [0, T]. An exit from the ball stops
/// the integration and is recorded, not thrown.
BallTrajectory flow_ball(const ExtendedGenerator& g, const BallPoint& p, double T,
                         double tol = 1e-10, bool record = false);

/// | F_{t+s}(p) - F_t(F_s(p)) | for the ball flow.
double ball_semigroup_residual(const ExtendedGenerator& g, const BallPoint& p, double t, double s,
                               double tol = 1e-10);

}  // namespace spirallab

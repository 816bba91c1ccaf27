#pragma once

// Sampled covering-radius checks. The set
//   Omega_alpha = { x : alpha |h'(x0)| (1-|x0|^2) < |h'(x)| (1-|x|^2) }
// and the largest disk around a center that h(Omega_alpha) contains.

#include <optional>

#include "spirallab/univalent.hpp"

namespace spirallab {

/// Polar sample grid with radii r_k = 1 - (1 - k/N)^2, k = 0..N-1, which
/// concentrates rings near the unit circle.
struct PolarGrid {
  int radial = 400;
  int angular = 400;

  double radius(int k) const;
  double angle(int j) const;
  Complex point(int k, int j) const { return std::polar(radius(k), angle(j)); }
};

struct OmegaSpec {
  Complex x0;
  double alpha;
  double threshold;  ///< alpha |h'(x0)| (1 - |x0|^2)

  static OmegaSpec make(const UnivalentMap& h, Complex x0, double alpha);
};

bool omega_contains(const UnivalentMap& h, const OmegaSpec& spec, Complex x);

/// Membership in the transformed region |g'(z)| > alpha / (1 - |z|^2) of the
/// map g normalized at x0.
bool omega_tilde_contains(const NormalizedMap& g, double alpha, Complex z);

struct RadiusEstimate {
  double radius;            ///< min of complement distance and boundary clamp
  double complement_distance;  ///< +inf when no complement sample exists
  double boundary_distance;
  Complex witness;          ///< sample achieving the minimum
  bool complement_empty;
  long complement_samples;
};

/// Sampled radius of the largest disk around `center` inside h(Omega_alpha):
/// the minimum of |h(x) - center| over grid samples outside Omega_alpha,
/// clamped by the distance to h(|x| = 1 - boundary_eps).
RadiusEstimate covered_radius_estimate(const UnivalentMap& h, const OmegaSpec& spec,
                                       Complex center, const PolarGrid& grid,
                                       double boundary_eps = 1e-3);

struct CoveringReport {
  double predicted_radius = 0.0;
  double measured_radius_lower = 0.0;
  double tolerance = 0.0;
  Complex center;
  bool pass = false;
  PolarGrid grid;
  Complex min_witness;
  bool complement_empty = false;
  // Extras for the beta-scaled check.
  std::optional<Complex> beta;
  std::optional<Complex> x1;
  std::optional<double> secondary_bound;
};

/// grid_tolerance = 5e-3 * predicted + 1e-6.
double grid_tolerance(double predicted);

CoveringReport verify_theorem1(const UnivalentMap& h, Complex x0, double alpha,
                               const PolarGrid& grid = {});

/// Requires 0 < alpha < |beta| < 1 and beta h(D) in h(D) (not re-verified).
CoveringReport verify_theorem2(const UnivalentMap& h, Complex x0, double alpha, Complex beta,
                               const PolarGrid& grid = {});

/// Region dump rows (x, in_omega) over the grid, for plotting.
struct RegionSample {
  Complex x;
  bool in_omega;
};
std::vector<RegionSample> sample_region(const UnivalentMap& h, const OmegaSpec& spec,
                                        const PolarGrid& grid);

}  // namespace spirallab

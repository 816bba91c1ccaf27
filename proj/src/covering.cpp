#include "spirallab/covering.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "spirallab/parallel.hpp"

namespace spirallab {

double PolarGrid::radius(int k) const {
  const double s = 1.0 - static_cast<double>(k) / radial;
  return 1.0 - s * s;
}

double PolarGrid::angle(int j) const { return 2.0 * kPi * j / angular; }

OmegaSpec OmegaSpec::make(const UnivalentMap& h, Complex x0, double alpha) {
  require_in_disk(x0, "OmegaSpec x0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::domain, "alpha must lie in (0, 1)");
  const double threshold = alpha * std::abs(h.deriv(x0)) * (1.0 - std::norm(x0));
  if (!(threshold > 0.0)) throw Error(ErrorCode::derivative_vanishes, "h'(x0) = 0");
  return {x0, alpha, threshold};
}

bool omega_contains(const UnivalentMap& h, const OmegaSpec& spec, Complex x) {
  return spec.threshold < std::abs(h.deriv(x)) * (1.0 - std::norm(x));
}

bool omega_tilde_contains(const NormalizedMap& g, double alpha, Complex z) {
  return std::abs(g.deriv(z)) > alpha / (1.0 - std::norm(z));
}

RadiusEstimate covered_radius_estimate(const UnivalentMap& h, const OmegaSpec& spec,
                                       Complex center, const PolarGrid& grid,
                                       double boundary_eps) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  struct RowMin {
    double distance = kInf;
    Complex witness;
    long count = 0;
  };
  std::vector<RowMin> rows(static_cast<std::size_t>(grid.radial));
  parallel_for(rows.size(), [&](std::size_t k) {
    RowMin best;
    const double rho = grid.radius(static_cast<int>(k));
    for (int j = 0; j < grid.angular; ++j) {
      const Complex x = std::polar(rho, grid.angle(j));
      if (spec.threshold < std::abs(h.deriv_unchecked(x)) * (1.0 - rho * rho)) continue;
      ++best.count;
      const double d = std::abs(h.value_unchecked(x) - center);
      if (d < best.distance) {
        best.distance = d;
        best.witness = x;
      }
    }
    rows[k] = best;
  });

  RadiusEstimate est{kInf, kInf, kInf, 0.0, true, 0};
  for (const auto& row : rows) {
    est.complement_samples += row.count;
    if (row.distance < est.complement_distance) {
      est.complement_distance = row.distance;
      est.witness = row.witness;
    }
  }
  est.complement_empty = est.complement_samples == 0;

  const double rho = 1.0 - boundary_eps;
  const int boundary_points = 2 * grid.angular;
  Complex boundary_witness;
  for (int j = 0; j < boundary_points; ++j) {
    const Complex x = std::polar(rho, 2.0 * kPi * j / boundary_points);
    const double d = std::abs(h.value_unchecked(x) - center);
    if (d < est.boundary_distance) {
      est.boundary_distance = d;
      boundary_witness = x;
    }
  }
  if (est.boundary_distance < est.complement_distance) {
    est.radius = est.boundary_distance;
    est.witness = boundary_witness;
  } else {
    est.radius = est.complement_distance;
  }
  return est;
}

double grid_tolerance(double predicted) { return 5e-3 * predicted + 1e-6; }

CoveringReport verify_theorem1(const UnivalentMap& h, Complex x0, double alpha,
                               const PolarGrid& grid) {
  const auto spec = OmegaSpec::make(h, x0, alpha);
  CoveringReport report;
  report.predicted_radius = (1.0 - alpha) / 4.0 * std::abs(h.deriv(x0)) * (1.0 - std::norm(x0));
  report.center = h.value(x0);
  report.grid = grid;
  const auto est = covered_radius_estimate(h, spec, report.center, grid);
  report.measured_radius_lower = est.radius;
  report.min_witness = est.witness;
  report.complement_empty = est.complement_empty;
  report.tolerance = grid_tolerance(report.predicted_radius);
  report.pass = report.measured_radius_lower >= report.predicted_radius - report.tolerance;
  return report;
}

CoveringReport verify_theorem2(const UnivalentMap& h, Complex x0, double alpha, Complex beta,
                               const PolarGrid& grid) {
  const double b = std::abs(beta);
  if (!(alpha > 0.0 && alpha < b && b < 1.0)) {
    throw Error(ErrorCode::domain, "beta covering requires 0 < alpha < |beta| < 1");
  }
  const auto spec = OmegaSpec::make(h, x0, alpha);
  const Complex center = beta * h.value(x0);
  Complex x1;
  try {
    x1 = h.invert(center, x0);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("x1-inversion-failure: beta h(x0) not in the image (") +
                              e.what() + ")");
  }
  CoveringReport report;
  report.beta = beta;
  report.x1 = x1;
  report.center = center;
  report.grid = grid;
  report.predicted_radius = (b - alpha) / (4.0 * b) * std::abs(h.deriv(x1)) * (1.0 - std::norm(x1));
  report.secondary_bound = (b - alpha) / 4.0 * std::abs(h.deriv(x0)) * (1.0 - std::norm(x0));
  const auto est = covered_radius_estimate(h, spec, center, grid);
  report.measured_radius_lower = est.radius;
  report.min_witness = est.witness;
  report.complement_empty = est.complement_empty;
  report.tolerance = grid_tolerance(report.predicted_radius);
  report.pass = report.measured_radius_lower >= report.predicted_radius - report.tolerance &&
                report.predicted_radius >= *report.secondary_bound - 1e-12;
  return report;
}

std::vector<RegionSample> sample_region(const UnivalentMap& h, const OmegaSpec& spec,
                                        const PolarGrid& grid) {
  std::vector<RegionSample> out;
  out.reserve(static_cast<std::size_t>(grid.radial) * grid.angular);
  for (int k = 0; k < grid.radial; ++k) {
    for (int j = 0; j < grid.angular; ++j) {
      const Complex x = grid.point(k, j);
      out.push_back({x, omega_contains(h, spec, x)});
    }
  }
  return out;
}

}  // namespace spirallab

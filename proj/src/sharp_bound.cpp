#include "spirallab/sharp_bound.hpp"

#include <cmath>
#include <limits>

namespace spirallab {

SharpParams::SharpParams(Complex lambda_, int r_) : lambda(lambda_), r(r_) {
  if (!(lambda.real() > 0.0)) throw Error(ErrorCode::domain, "sharp bound needs Re lambda > 0");
  if (r < 1) throw Error(ErrorCode::domain, "sharp bound needs r >= 1");
}

double SharpParams::limit() const {
  const double ratio = a() / std::abs(lambda);
  return ratio * ratio;
}

namespace {

struct Parts {
  double numerator;    // 1 - |e^{-u}|
  double denominator;  // |1 - e^{-u}|
};

// u = r lambda t. Both parts vanish at t = 0; expm1 and the half-angle form of
// 1 - cos keep the relative accuracy for small t.
Parts parts(const SharpParams& p, double t) {
  const double A = p.r * p.a() * t;
  const double B = p.r * p.b() * t;
  const double num = -std::expm1(-A);
  const double s = std::sin(0.5 * B);
  const double re = num * std::cos(B) + 2.0 * s * s;
  const double im = std::exp(-A) * std::sin(B);
  return {num, std::hypot(re, im)};
}

}  // namespace

double f_sharp(const SharpParams& p, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::nonpositive_t, "f(t) is defined for t > 0");
  if (t < 1e-6 / std::abs(p.lambda)) {
    // Second-order Taylor quotient: 1 - e^{-A} ~ A - A^2/2, 1 - e^{-u} ~ u - u^2/2.
    const Complex u = static_cast<double>(p.r) * p.lambda * t;
    const double A = u.real();
    const double ratio = (A - 0.5 * A * A) / std::abs(u - 0.5 * u * u);
    return ratio * ratio;
  }
  const auto [num, den] = parts(p, t);
  const double ratio = num / den;
  return ratio * ratio;
}

double cor_margin(const SharpParams& p, double t) {
  const auto [num, den] = parts(p, t);
  return num - den * p.a() / std::abs(p.lambda);
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0 && hi > lo) || n < 2) throw Error(ErrorCode::domain, "log_grid needs 0 < lo < hi, n >= 2");
  std::vector<double> out(n);
  const double step = std::log(hi / lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo * std::exp(step * static_cast<double>(i));
  out.back() = hi;
  return out;
}

InfimumResult infimum_f(const SharpParams& p, double t_max, std::size_t grid_points) {
  const double t_min = 1e-6 / (p.r * std::abs(p.lambda));
  if (!(t_max > t_min)) throw Error(ErrorCode::domain, "t_max too small");
  const auto grid = log_grid(t_min, t_max, std::max<std::size_t>(grid_points, 2));
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = f_sharp(p, grid[i]);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  // Golden-section refinement inside the neighbouring cells.
  double lo = grid[best == 0 ? 0 : best - 1];
  double hi = grid[std::min(best + 1, grid.size() - 1)];
  double argmin = grid[best];
  if (hi > lo) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    double fc = f_sharp(p, c), fd = f_sharp(p, d);
    for (int it = 0; it < 100 && hi - lo > 1e-15 * hi; ++it) {
      if (fc < fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - g * (hi - lo);
        fc = f_sharp(p, c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + g * (hi - lo);
        fd = f_sharp(p, d);
      }
    }
    const double mid = 0.5 * (lo + hi);
    const double fm = f_sharp(p, mid);
    if (fm < best_value) {
      best_value = fm;
      argmin = mid;
    }
  }
  const double limit = p.limit();
  // The infimum is approached as t -> 0+ and is not attained.
  const double infimum = best_value >= limit ? limit : best_value;
  return {infimum, best_value, argmin, limit, t_min, t_max, grid.size()};
}

CorReport verify_cor_inequality(const SharpParams& p, std::span<const double> t_grid) {
  CorReport report{std::numeric_limits<double>::infinity(), 0.0, 0.0, true, true, t_grid.size()};
  for (double t : t_grid) {
    if (!(t > 0.0)) throw Error(ErrorCode::nonpositive_t, "t grid must lie in (0, inf)");
    const double m = cor_margin(p, t);
    if (m < report.min_margin) {
      report.min_margin = m;
      report.argmin = t;
    }
    report.max_abs_margin = std::max(report.max_abs_margin, std::abs(m));
    report.strictly_positive = report.strictly_positive && m > 0.0;
    report.identically_zero = report.identically_zero && m == 0.0;
  }
  return report;
}

double critical_residual(const SharpParams& p, double t) {
  const double a = p.a(), b = p.b();
  const double E = std::exp(-a * p.r * t);
  const double A = a * a * (1.0 + E) * (1.0 + E);
  const double B = b * b * (1.0 - E) * (1.0 - E);
  return std::cos(b * p.r * t) - (A - B) / (A + B);
}

std::vector<CriticalPoint> critical_points(const SharpParams& p, double lo, double hi,
                                           std::size_t scan_points) {
  if (p.b() == 0.0) throw Error(ErrorCode::no_roots, "f is constant when lambda is real");
  if (!(lo > 0.0 && hi > lo)) throw Error(ErrorCode::domain, "window must satisfy 0 < lo < hi");
  const double a = p.a(), b = p.b();
  std::vector<CriticalPoint> out;
  const double h = (hi - lo) / static_cast<double>(scan_points);
  double t0 = lo;
  double g0 = critical_residual(p, t0);
  for (std::size_t i = 1; i <= scan_points; ++i) {
    const double t1 = lo + h * static_cast<double>(i);
    const double g1 = critical_residual(p, t1);
    if ((g0 < 0.0) != (g1 < 0.0)) {
      double l = t0, r = t1, gl = g0;
      for (int it = 0; it < 200 && r - l > 4e-16 * r; ++it) {
        const double m = 0.5 * (l + r);
        const double gm = critical_residual(p, m);
        if ((gm < 0.0) == (gl < 0.0)) {
          l = m;
          gl = gm;
        } else {
          r = m;
        }
      }
      const double t = 0.5 * (l + r);
      const double E = std::exp(-a * p.r * t);
      const double A = a * a * (1.0 + E) * (1.0 + E);
      const double B = b * b * (1.0 - E) * (1.0 - E);
      CriticalPoint cp;
      cp.t = t;
      cp.f_value = f_sharp(p, t);
      cp.displayed_value = a * a / (a * a + b * b) + B / (A + B);
      cp.exact_value = (A + B) / ((a * a + b * b) * (1.0 + E) * (1.0 + E));
      const double delta = 1e-4 * std::max(t, 1e-3);
      const double left = f_sharp(p, t) - f_sharp(p, t - delta);
      const double right = f_sharp(p, t + delta) - f_sharp(p, t);
      cp.stationary = (left > 0.0) != (right > 0.0);
      out.push_back(cp);
    }
    t0 = t1;
    g0 = g1;
  }
  if (out.empty()) throw Error(ErrorCode::no_roots, "no roots of the critical-point equation in window");
  return out;
}

}  // namespace spirallab

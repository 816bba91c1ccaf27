#pragma once

#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "spirallab/types.hpp"

namespace spirallab {

struct QuadratureResult {
  Complex value;
  double error_estimate = 0.0;
  int intervals = 0;
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
inline constexpr std::array<double, 8> kGk15Nodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kGk15Weights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGauss7Weights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  Complex value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gk15_panel(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const Complex fc = f(center);
  Complex kronrod = fc * kGk15Weights[7];
  Complex gauss = fc * kGauss7Weights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kGk15Nodes[j];
    const Complex sum = f(center - dx) + f(center + dx);
    kronrod += kGk15Weights[j] * sum;
    if (j % 2 == 1) gauss += kGauss7Weights[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod quadrature of a complex-valued integrand
/// over the real interval [a, b]. Throws quadrature_failure when the integrand
/// is not finite or the subdivision budget is exhausted far from tolerance.
template <class F>
QuadratureResult integrate_gk15(F&& f, double a, double b, double abs_tol = 1e-14,
                                double rel_tol = 1e-14, int max_intervals = 400) {
  std::priority_queue<detail::Panel> panels;
  panels.push(detail::gk15_panel(f, a, b));
  Complex total = panels.top().value;
  double error = panels.top().error;
  int count = 1;
  while (error > std::max(abs_tol, rel_tol * std::abs(total)) && count < max_intervals) {
    const detail::Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      panels.push(worst);
      break;
    }
    const auto left = detail::gk15_panel(f, worst.a, mid);
    const auto right = detail::gk15_panel(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++count;
  }
  // Recompute the sums from the surviving panels to shed drift from the
  // incremental updates above.
  total = 0.0;
  error = 0.0;
  while (!panels.empty()) {
    total += panels.top().value;
    error += panels.top().error;
    panels.pop();
  }
  if (!std::isfinite(total.real()) || !std::isfinite(total.imag())) {
    throw Error(ErrorCode::quadrature_failure, "integrand not finite on the path");
  }
  const double target = std::max(abs_tol, rel_tol * std::abs(total));
  if (error > 1e6 * target) {
    throw Error(ErrorCode::quadrature_failure,
                "subdivision budget exhausted (error estimate " + std::to_string(error) + ")");
  }
  return {total, error, count};
}

}  // namespace spirallab

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include "spirallab/types.hpp"

namespace spirallab {

struct OdeOptions {
  double abs_tol = 1e-10;
  long max_steps = 1'000'000;
  double initial_step = 1e-3;
};

struct OdeResult {
  CVec state;
  double time = 0.0;
  long steps = 0;
  long rejected = 0;
  double local_error_sum = 0.0;
  bool stopped = false;  ///< domain predicate rejected an accepted step
};

/// Dormand-Prince 5(4) integration of the autonomous system y' = rhs(y) from
/// t = 0 to t_end with an absolute per-component tolerance.
///
/// `inside(y)` is evaluated on every accepted state; when it returns false the
/// integration stops with `stopped = true` and that state in `state`.
/// `observe(t, y)` sees every accepted state (including the initial one).
class DormandPrince {
 public:
  using Rhs = std::function<CVec(const CVec&)>;
  using Predicate = std::function<bool(const CVec&)>;
  using Observer = std::function<void(double, const CVec&)>;

  explicit DormandPrince(OdeOptions options = {}) : options_(options) {}

  OdeResult integrate(const Rhs& rhs, CVec y, double t_end, const Predicate& inside = {},
                      const Observer& observe = {}) const {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // 5th-order minus embedded 4th-order weights.
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    OdeResult result;
    result.state = y;
    if (observe) observe(0.0, y);
    if (t_end <= 0.0) return result;

    double t = 0.0;
    double h = std::min(options_.initial_step, t_end);
    const double h_min = 1e-14 * std::max(1.0, t_end);
    CVec k1 = rhs(y);
    while (t < t_end) {
      if (result.steps + result.rejected >= options_.max_steps) {
        throw Error(ErrorCode::step_underflow, "maximum number of steps exceeded");
      }
      const bool last = t + h >= t_end;
      if (last) h = t_end - t;

      const CVec k2 = rhs(y + h * (a21 * k1));
      const CVec k3 = rhs(y + h * (a31 * k1 + a32 * k2));
      const CVec k4 = rhs(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
      const CVec k5 = rhs(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const CVec k6 = rhs(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      const CVec y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const CVec k7 = rhs(y_new);
      const CVec err_vec = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      double err = err_vec.cwiseAbs().maxCoeff() / options_.abs_tol;
      if (!std::isfinite(err)) err = 1e10;

      if (err <= 1.0) {
        t = last ? t_end : t + h;
        y = y_new;
        k1 = k7;
        ++result.steps;
        result.local_error_sum += err * options_.abs_tol;
        if (observe) observe(t, y);
        if (inside && !inside(y)) {
          result.stopped = true;
          break;
        }
      } else {
        ++result.rejected;
      }
      const double factor =
          err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h *= factor;
      if (h < h_min && t < t_end) {
        throw Error(ErrorCode::step_underflow, "step size fell below " + std::to_string(h_min));
      }
    }
    result.state = y;
    result.time = t;
    return result;
  }

 private:
  OdeOptions options_;
};

}  // namespace spirallab

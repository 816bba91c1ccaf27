#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace spirallab {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

enum class ErrorCode {
  point_outside_disk,
  no_convergence,
  iterate_left_disk,
  derivative_vanishes,
  branch_tracking_failure,
  step_underflow,
  left_disk,
  left_ball,
  quadrature_failure,
  degree_mismatch,
  nonpositive_t,
  no_roots,
  unresolved_singularity,
  domain,
  hypothesis_violated,
  invalid_spec,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require_in_disk(Complex z, std::string_view where) {
  if (!(std::abs(z) < 1.0)) {
    throw Error(ErrorCode::point_outside_disk, std::string(where) + ": |z| >= 1");
  }
}

}  // namespace spirallab

#include "spirallab/univalent.hpp"

#include <array>
#include <cmath>

namespace spirallab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::point_outside_disk: return "point-outside-disk";
    case ErrorCode::no_convergence: return "no-convergence";
    case ErrorCode::iterate_left_disk: return "iterate-left-disk";
    case ErrorCode::derivative_vanishes: return "derivative-vanishes";
    case ErrorCode::branch_tracking_failure: return "branch-tracking-failure";
    case ErrorCode::step_underflow: return "step-underflow";
    case ErrorCode::left_disk: return "left-disk";
    case ErrorCode::left_ball: return "left-ball";
    case ErrorCode::quadrature_failure: return "quadrature-failure";
    case ErrorCode::degree_mismatch: return "degree-mismatch";
    case ErrorCode::nonpositive_t: return "nonpositive-t";
    case ErrorCode::no_roots: return "no-roots";
    case ErrorCode::unresolved_singularity: return "unresolved-singularity";
    case ErrorCode::domain: return "domain";
    case ErrorCode::hypothesis_violated: return "hypothesis-violated";
    case ErrorCode::invalid_spec: return "invalid-spec";
  }
  return "unknown";
}

std::string_view to_string(Family family) {
  switch (family) {
    case Family::identity: return "identity";
    case Family::koebe: return "koebe";
    case Family::mobius_spiral: return "mobius_spiral";
    case Family::spiral_koebe: return "spiral_koebe";
    case Family::half_plane: return "half_plane";
    case Family::rational: return "rational";
    case Family::custom: return "custom";
  }
  return "unknown";
}

namespace {

// Value and first two derivatives of a polynomial (ascending coefficients).
std::array<Complex, 3> horner2(const std::vector<Complex>& coeffs, Complex z) {
  Complex p = 0.0, dp = 0.0, ddp = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    ddp = ddp * z + 2.0 * dp;
    dp = dp * z + p;
    p = p * z + *it;
  }
  return {p, dp, ddp};
}

// (1 - z)^(-q) on the principal branch; Re(1 - z) > 0 in the disk.
Complex one_minus_pow(Complex z, Complex q) { return std::exp(-q * std::log(1.0 - z)); }

}  // namespace

UnivalentMap UnivalentMap::identity() {
  UnivalentMap h;
  h.family_ = Family::identity;
  h.multiplier_ = 1.0;
  return h;
}

UnivalentMap UnivalentMap::koebe() {
  UnivalentMap h;
  h.family_ = Family::koebe;
  h.multiplier_ = 1.0;
  return h;
}

UnivalentMap UnivalentMap::mobius_spiral(Complex c) {
  if (!(std::abs(c) < 1.0)) {
    throw Error(ErrorCode::domain, "mobius_spiral requires |c| < 1 (pole -1/c outside the disk)");
  }
  UnivalentMap h;
  h.family_ = Family::mobius_spiral;
  h.c_ = c;
  // Starlike for every |c| < 1; mu-spirallike whenever |c| < Re mu / |mu|.
  h.multiplier_ = 1.0;
  return h;
}

UnivalentMap UnivalentMap::spiral_koebe(double theta) {
  if (!(std::abs(theta) < kPi / 2)) {
    throw Error(ErrorCode::domain, "spiral_koebe requires |theta| < pi/2");
  }
  UnivalentMap h;
  h.family_ = Family::spiral_koebe;
  h.theta_ = theta;
  h.spiral_exponent_ = 2.0 * std::polar(1.0, -theta) * std::cos(theta);
  return h;
}

UnivalentMap UnivalentMap::half_plane() {
  UnivalentMap h;
  h.family_ = Family::half_plane;
  h.multiplier_ = 1.0;
  return h;
}

UnivalentMap UnivalentMap::rational(std::vector<Complex> numerator,
                                    std::vector<Complex> denominator) {
  if (numerator.empty() || denominator.empty()) {
    throw Error(ErrorCode::invalid_spec, "rational map needs nonempty coefficient lists");
  }
  bool nonzero = false;
  for (auto c : denominator) nonzero = nonzero || c != 0.0;
  if (!nonzero) throw Error(ErrorCode::invalid_spec, "rational map has zero denominator");
  UnivalentMap h;
  h.family_ = Family::rational;
  h.num_ = std::move(numerator);
  h.den_ = std::move(denominator);
  return h;
}

UnivalentMap UnivalentMap::custom(AnalyticFunction function) {
  if (!function.value || !function.deriv) {
    throw Error(ErrorCode::invalid_spec, "custom map needs value and derivative callables");
  }
  UnivalentMap h;
  h.family_ = Family::custom;
  h.custom_ = std::make_shared<const AnalyticFunction>(std::move(function));
  return h;
}

UnivalentMap UnivalentMap::with_spiral_multiplier(Complex mu) const {
  if (!(mu.real() > 0.0)) throw Error(ErrorCode::domain, "spiral multiplier needs Re mu > 0");
  UnivalentMap copy = *this;
  copy.multiplier_ = mu;
  return copy;
}

std::string UnivalentMap::name() const {
  if (family_ == Family::custom) return custom_->name;
  return std::string(to_string(family_));
}

bool UnivalentMap::has_closed_inverse() const noexcept {
  switch (family_) {
    case Family::identity:
    case Family::koebe:
    case Family::mobius_spiral:
    case Family::half_plane: return true;
    default: return false;
  }
}

Complex UnivalentMap::value_unchecked(Complex z) const {
  switch (family_) {
    case Family::identity: return z;
    case Family::koebe: return z / ((1.0 - z) * (1.0 - z));
    case Family::mobius_spiral: return z / (1.0 + c_ * z);
    case Family::spiral_koebe: return z * one_minus_pow(z, spiral_exponent_);
    case Family::half_plane: return (1.0 - z) / (1.0 + z);
    case Family::rational: return horner2(num_, z)[0] / horner2(den_, z)[0];
    case Family::custom: return custom_->value(z);
  }
  return z;
}

Complex UnivalentMap::deriv_unchecked(Complex z) const {
  switch (family_) {
    case Family::identity: return 1.0;
    case Family::koebe: {
      const Complex w = 1.0 - z;
      return (1.0 + z) / (w * w * w);
    }
    case Family::mobius_spiral: {
      const Complex d = 1.0 + c_ * z;
      return 1.0 / (d * d);
    }
    case Family::spiral_koebe: {
      const Complex p = spiral_exponent_;
      return one_minus_pow(z, p + 1.0) * (1.0 + (p - 1.0) * z);
    }
    case Family::half_plane: {
      const Complex d = 1.0 + z;
      return -2.0 / (d * d);
    }
    case Family::rational: {
      const auto n = horner2(num_, z);
      const auto d = horner2(den_, z);
      return (n[1] * d[0] - n[0] * d[1]) / (d[0] * d[0]);
    }
    case Family::custom: return custom_->deriv(z);
  }
  return 1.0;
}

Complex UnivalentMap::second_deriv_unchecked(Complex z) const {
  switch (family_) {
    case Family::identity: return 0.0;
    case Family::koebe: {
      const Complex w = 1.0 - z;
      return (4.0 + 2.0 * z) / (w * w * w * w);
    }
    case Family::mobius_spiral: {
      const Complex d = 1.0 + c_ * z;
      return -2.0 * c_ / (d * d * d);
    }
    case Family::spiral_koebe: {
      const Complex p = spiral_exponent_;
      return p * one_minus_pow(z, p + 2.0) * (2.0 + (p - 1.0) * z);
    }
    case Family::half_plane: {
      const Complex d = 1.0 + z;
      return 4.0 / (d * d * d);
    }
    case Family::rational: {
      const auto n = horner2(num_, z);
      const auto d = horner2(den_, z);
      const Complex d2 = d[0] * d[0];
      return (n[2] * d[0] - n[0] * d[2]) / d2 - 2.0 * d[1] * (n[1] * d[0] - n[0] * d[1]) / (d2 * d[0]);
    }
    case Family::custom: {
      if (custom_->second_deriv) return custom_->second_deriv(z);
      // Central difference of h' with step 1e-5, shrunk near the boundary.
      const double step = std::min(1e-5, 0.5 * (1.0 - std::abs(z)));
      return (custom_->deriv(z + step) - custom_->deriv(z - step)) / (2.0 * step);
    }
  }
  return 0.0;
}

Complex UnivalentMap::value(Complex z) const {
  require_in_disk(z, "eval_map");
  return value_unchecked(z);
}

Complex UnivalentMap::deriv(Complex z) const {
  require_in_disk(z, "eval_deriv");
  return deriv_unchecked(z);
}

Complex UnivalentMap::second_deriv(Complex z) const {
  require_in_disk(z, "second derivative");
  return second_deriv_unchecked(z);
}

namespace {

Complex checked_preimage(Complex z) {
  if (!(std::abs(z) < 1.0) || !std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw Error(ErrorCode::no_convergence, "value lies outside the image of the disk");
  }
  return z;
}

}  // namespace

Complex UnivalentMap::invert(Complex w, Complex guess) const {
  switch (family_) {
    case Family::identity: return checked_preimage(w);
    case Family::koebe: {
      // Roots of w z^2 - (2w + 1) z + w = 0 have product 1; with s the principal
      // root of 1 + 4w, (s - 1)/(s + 1) is the one inside the disk.
      const Complex s = std::sqrt(1.0 + 4.0 * w);
      return checked_preimage((s - 1.0) / (s + 1.0));
    }
    case Family::mobius_spiral: return checked_preimage(w / (1.0 - c_ * w));
    case Family::half_plane: return checked_preimage((1.0 - w) / (1.0 + w));
    default: break;
  }
  return newton_invert([this](Complex z) { return value_unchecked(z); },
                       [this](Complex z) { return deriv_unchecked(z); }, w, guess);
}

Complex newton_invert(const std::function<Complex(Complex)>& value,
                      const std::function<Complex(Complex)>& deriv, Complex w, Complex guess) {
  constexpr int kMaxIterations = 100;
  constexpr double kMaxModulus = 1.0 - 1e-9;
  const double tol = 1e-12 * std::max(1.0, std::abs(w));

  bool left_disk = false;
  auto attempt = [&](Complex z) -> std::optional<Complex> {
    if (!(std::abs(z) < kMaxModulus)) z *= kMaxModulus / std::abs(z);
    Complex residual = value(z) - w;
    for (int it = 0; it < kMaxIterations; ++it) {
      if (std::abs(residual) <= tol) return z;
      const Complex d = deriv(z);
      if (d == 0.0) return std::nullopt;
      const Complex step = residual / d;
      double damping = 1.0;
      bool accepted = false;
      while (damping > 1e-10) {
        const Complex candidate = z - damping * step;
        if (std::abs(candidate) < kMaxModulus) {
          const Complex r = value(candidate) - w;
          if (std::abs(r) < std::abs(residual)) {
            z = candidate;
            residual = r;
            accepted = true;
            break;
          }
        } else {
          left_disk = true;
        }
        damping *= 0.5;
      }
      if (!accepted) break;
    }
    if (std::abs(residual) <= tol) return z;
    return std::nullopt;
  };

  if (auto z = attempt(guess)) return *z;
  std::vector<Complex> starts{0.0};
  for (int k = 0; k < 8; ++k) {
    starts.push_back(std::polar(0.5, k * kPi / 4));
    starts.push_back(std::polar(0.9, k * kPi / 4));
  }
  for (Complex s : starts) {
    if (auto z = attempt(s)) return *z;
  }
  if (left_disk) {
    throw Error(ErrorCode::iterate_left_disk, "Newton iterates were pushed to the disk boundary");
  }
  throw Error(ErrorCode::no_convergence, "Newton inversion did not converge");
}

Complex disk_automorphism(Complex x0, Complex z) {
  require_in_disk(x0, "disk_automorphism base point");
  require_in_disk(z, "disk_automorphism argument");
  return (x0 - z) / (1.0 - std::conj(x0) * z);
}

DiskAutomorphism::DiskAutomorphism(Complex x0) : base_point(x0) {
  require_in_disk(x0, "DiskAutomorphism");
}

Complex DiskAutomorphism::deriv(Complex z) const {
  const Complex d = 1.0 - std::conj(base_point) * z;
  return (std::norm(base_point) - 1.0) / (d * d);
}

NormalizedMap::NormalizedMap(UnivalentMap h, Complex x0) : h_(std::move(h)), x0_(x0) {
  require_in_disk(x0, "normalize_at");
  h_x0_ = h_.value(x0);
  const Complex d = h_.deriv(x0);
  if (d == 0.0) throw Error(ErrorCode::derivative_vanishes, "h'(x0) = 0");
  scale_ = d * (std::norm(x0) - 1.0);
}

Complex NormalizedMap::value(Complex z) const {
  return (h_.value(disk_automorphism(x0_, z)) - h_x0_) / scale_;
}

Complex NormalizedMap::deriv(Complex z) const {
  // phi'(z) = (|x0|^2 - 1) / (1 - conj(x0) z)^2 cancels the scale's factor.
  const Complex d = 1.0 - std::conj(x0_) * z;
  return h_.deriv(disk_automorphism(x0_, z)) * (std::norm(x0_) - 1.0) / (d * d * scale_);
}

NormalizedMap normalize_at(const UnivalentMap& h, Complex x0) { return NormalizedMap(h, x0); }

BranchedPower::BranchedPower(UnivalentMap map, double root_order, Complex anchor)
    : map_(std::move(map)), order_(root_order), anchor_(anchor) {
  if (!(root_order >= 1.0)) throw Error(ErrorCode::domain, "root order must be >= 1");
  require_in_disk(anchor, "BranchedPower anchor");
  const Complex d = map_.deriv(anchor);
  if (d == 0.0) throw Error(ErrorCode::derivative_vanishes, "h'(anchor) = 0");
  anchor_log_ = std::log(d);
  constant_deriv_ = map_.family() == Family::identity;
}

Complex BranchedPower::log_deriv(Complex x) const {
  require_in_disk(x, "fractional_power");
  if (constant_deriv_) return anchor_log_;
  if (x == anchor_) return anchor_log_;

  // Accumulate principal-log increments of h' along the segment; refine the
  // mesh until every increment turns by less than pi/4.
  constexpr double kMaxTurn = kPi / 4;
  for (int steps = 16; steps <= (1 << 16); steps *= 2) {
    Complex log_value = anchor_log_;
    Complex prev = map_.deriv_unchecked(anchor_);
    bool ok = true;
    for (int k = 1; k <= steps; ++k) {
      const Complex z = anchor_ + (x - anchor_) * (static_cast<double>(k) / steps);
      const Complex cur = map_.deriv_unchecked(z);
      if (cur == 0.0) throw Error(ErrorCode::derivative_vanishes, "h' vanishes on the branch path");
      const Complex increment = std::log(cur / prev);
      if (std::abs(increment.imag()) > kMaxTurn) {
        ok = false;
        break;
      }
      log_value += increment;
      prev = cur;
    }
    if (ok) {
      // Real part exactly log|h'(x)|; the imaginary part carries the branch.
      return {std::log(std::abs(prev)), log_value.imag()};
    }
  }
  throw Error(ErrorCode::branch_tracking_failure, "h' winds too fast along the path");
}

Complex BranchedPower::operator()(Complex x) const {
  if (order_ == 1.0) {
    require_in_disk(x, "fractional_power");
    return map_.deriv_unchecked(x);
  }
  return std::exp(log_deriv(x) / order_);
}

DistortionBounds distortion_bounds(Complex z) {
  require_in_disk(z, "distortion_bounds");
  const double rho = std::abs(z);
  const double s = 1.0 + rho;
  return {(1.0 - rho) / (s * s * s), rho / (s * s)};
}

bool sampled_univalence_prerequisite(const UnivalentMap& h, int radial, int angular) {
  for (int i = 0; i < radial; ++i) {
    const double rho = 0.99 * i / std::max(1, radial - 1);
    for (int j = 0; j < angular; ++j) {
      const Complex z = std::polar(rho, 2.0 * kPi * j / angular);
      const Complex d = h.deriv_unchecked(z);
      const Complex v = h.value_unchecked(z);
      if (d == 0.0 || !std::isfinite(std::abs(d)) || !std::isfinite(std::abs(v))) return false;
    }
  }
  return true;
}

}  // namespace spirallab

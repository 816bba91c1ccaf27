#pragma once

// Disk primitives: univalent function families, disk automorphisms,
// branch-consistent fractional powers of h', Newton inversion and the Koebe
// distortion lower bounds.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "spirallab/types.hpp"

namespace spirallab {

enum class Family { identity, koebe, mobius_spiral, spiral_koebe, half_plane, rational, custom };

std::string_view to_string(Family family);

/// A holomorphic function given by callables, used for maps with no closed
/// form (e.g. numerically constructed Koenigs functions). `second_deriv` may
/// be empty, in which case h'' is taken by central differences of h'.
struct AnalyticFunction {
  std::string name;
  std::function<Complex(Complex)> value;
  std::function<Complex(Complex)> deriv;
  std::function<Complex(Complex)> second_deriv;
};

/// A univalent holomorphic function on the unit disk.
///
/// Values are immutable after construction; all members are safe to call
/// concurrently.
class UnivalentMap {
 public:
  static UnivalentMap identity();
  /// k(z) = z / (1 - z)^2.
  static UnivalentMap koebe();
  /// h(z) = z / (1 + c z), |c| < 1.
  static UnivalentMap mobius_spiral(Complex c);
  /// h(z) = z (1 - z)^(-2 e^{-i theta} cos theta); theta = 0 is the Koebe function.
  static UnivalentMap spiral_koebe(double theta);
  /// h(z) = (1 - z) / (1 + z), onto the right half-plane.
  static UnivalentMap half_plane();
  /// h = N / D with coefficients in ascending powers of z.
  static UnivalentMap rational(std::vector<Complex> numerator, std::vector<Complex> denominator);
  static UnivalentMap custom(AnalyticFunction function);

  Family family() const noexcept { return family_; }
  std::string name() const;

  /// Family parameters (meaningful only for the corresponding family).
  Complex mobius_c() const noexcept { return c_; }
  double spiral_theta() const noexcept { return theta_; }
  const std::vector<Complex>& numerator() const noexcept { return num_; }
  const std::vector<Complex>& denominator() const noexcept { return den_; }

  /// Multiplier mu for which the map is declared mu-spirallike, if known.
  std::optional<Complex> spiral_multiplier() const noexcept { return multiplier_; }
  UnivalentMap with_spiral_multiplier(Complex mu) const;

  bool has_closed_inverse() const noexcept;

  // Unchecked evaluation; callers guarantee |z| < 1.
  Complex value_unchecked(Complex z) const;
  Complex deriv_unchecked(Complex z) const;
  Complex second_deriv_unchecked(Complex z) const;

  Complex value(Complex z) const;
  Complex deriv(Complex z) const;
  Complex second_deriv(Complex z) const;

  /// Solves h(z) = w for z in the disk; closed form when available, damped
  /// Newton from `guess` otherwise.
  Complex invert(Complex w, Complex guess = 0.0) const;

 private:
  UnivalentMap() = default;

  Family family_ = Family::identity;
  Complex c_{};
  double theta_ = 0.0;
  Complex spiral_exponent_{};  // 2 e^{-i theta} cos theta
  std::vector<Complex> num_, den_;
  std::shared_ptr<const AnalyticFunction> custom_;
  std::optional<Complex> multiplier_;
};

// Free-function surface used throughout the library.
inline Complex eval_map(const UnivalentMap& h, Complex z) { return h.value(z); }
inline Complex eval_deriv(const UnivalentMap& h, Complex z) { return h.deriv(z); }
inline Complex invert_map(const UnivalentMap& h, Complex w, Complex guess = 0.0) {
  return h.invert(w, guess);
}

/// Damped Newton solve of value(z) = w inside the disk. Tolerance is
/// 1e-12 * max(1, |w|) on the residual; at most 100 iterations per start.
Complex newton_invert(const std::function<Complex(Complex)>& value,
                      const std::function<Complex(Complex)>& deriv, Complex w, Complex guess);

/// The involutive disk automorphism z -> (x0 - z) / (1 - conj(x0) z).
Complex disk_automorphism(Complex x0, Complex z);

struct DiskAutomorphism {
  Complex base_point;

  explicit DiskAutomorphism(Complex x0);
  Complex operator()(Complex z) const { return disk_automorphism(base_point, z); }
  Complex deriv(Complex z) const;
};

/// g(z) = (h(phi(z)) - h(x0)) / (h'(x0) (|x0|^2 - 1)) with phi the
/// automorphism exchanging 0 and x0, so that g(0) = 0 and g'(0) = 1.
class NormalizedMap {
 public:
  NormalizedMap(UnivalentMap h, Complex x0);

  Complex value(Complex z) const;
  Complex deriv(Complex z) const;
  Complex base_point() const noexcept { return x0_; }

 private:
  UnivalentMap h_;
  Complex x0_;
  Complex h_x0_;
  Complex scale_;  // h'(x0) (|x0|^2 - 1)
};

NormalizedMap normalize_at(const UnivalentMap& h, Complex x0);

/// A branch of h'(x)^{1/r} fixed by the principal logarithm of h'(anchor) and
/// continued along the segment from the anchor to x.
class BranchedPower {
 public:
  BranchedPower(UnivalentMap map, double root_order, Complex anchor = 0.0);

  Complex operator()(Complex x) const;
  /// Continuous logarithm of h' at x along the segment from the anchor.
  Complex log_deriv(Complex x) const;

  const UnivalentMap& map() const noexcept { return map_; }
  double root_order() const noexcept { return order_; }
  Complex anchor() const noexcept { return anchor_; }

 private:
  UnivalentMap map_;
  double order_;
  Complex anchor_;
  Complex anchor_log_;
  bool constant_deriv_ = false;
};

inline Complex fractional_power(const BranchedPower& b, Complex x) { return b(x); }

struct DistortionBounds {
  double lower_deriv;
  double lower_value;
};

/// Koebe distortion lower bounds for normalized univalent g:
/// |g'(z)| >= (1-|z|)/(1+|z|)^3 and |g(z)| >= |z|/(1+|z|)^2.
DistortionBounds distortion_bounds(Complex z);

/// True when h' has no zero and h is finite on a polar sample grid of the disk.
bool sampled_univalence_prerequisite(const UnivalentMap& h, int radial = 50, int angular = 64);

}  // namespace spirallab

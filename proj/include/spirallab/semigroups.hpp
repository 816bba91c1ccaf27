#pragma once

// One-parameter semigroups on the disk: generators, their flows, Koenigs
// linearizing maps and spirallikeness checks.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "spirallab/covering.hpp"
#include "spirallab/random.hpp"
#include "spirallab/univalent.hpp"

namespace spirallab {

enum class GeneratorKind { dilation, hyperbolic };

std::string_view to_string(GeneratorKind kind);

/// An infinitesimal generator f on the disk; the semigroup solves
/// dz/dt = -f(z).
///
/// tau is the Denjoy-Wolff point (interior for dilation, on the circle for
/// hyperbolic) and mu = f'(tau), or the angular derivative in the hyperbolic
/// case. Higher derivatives are optional and only used near tau.
struct Generator {
  std::string name;
  std::function<Complex(Complex)> f;
  std::function<Complex(Complex)> df;
  std::function<Complex(Complex)> d2f;
  std::function<Complex(Complex)> d3f;
  GeneratorKind kind = GeneratorKind::dilation;
  Complex tau{};
  Complex mu{1.0};
  std::vector<Complex> coefficients;  ///< set for polynomial generators

  /// f(z) = sum_k c_k z^k. For a dilation generator with f(0) = 0 pass
  /// tau = 0 and mu = c_1.
  static Generator polynomial(std::vector<Complex> coeffs, GeneratorKind kind, Complex tau,
                              Complex mu, std::string name = "polynomial");

  /// f''(tau), by finite differences of f' when no closed form is attached.
  Complex second_at_tau() const;
  /// f'''(tau) when available in closed form.
  std::optional<Complex> third_at_tau() const;
};

/// (mu - f'(x)) / f(x). For a dilation generator the quotient is removable at
/// tau; within `eps` of tau it is evaluated from the Taylor model of f at tau
/// (cubic when f''' is available, quadratic otherwise). Throws
/// unresolved_singularity when f vanishes away from tau.
Complex generator_quotient(const Generator& gen, Complex x, double eps = 1e-4);

/// f(z) = z.
Generator identity_generator();
/// f(z) = z (1 - z); dilation, tau = 0, mu = 1.
Generator logistic_generator();
/// f(z) = z^2 - 1; hyperbolic, tau = 1, mu = 2.
Generator hyperbolic_square_generator();

/// min over the grid of Re p(z), f(z) = (z - tau)(1 - conj(tau) z) p(z).
double berkson_porta_margin(const Generator& gen, const PolarGrid& grid = {200, 256});

/// Radial difference quotient f(r tau) / ((r - 1) tau) at r = 1 - 1e-4,
/// estimating the angular derivative f'(tau) at a boundary point.
double angular_derivative_estimate(const Generator& gen);

/// Throws hypothesis_violated when f(tau) != 0 (dilation), the multiplier has
/// the wrong sign, or the Berkson-Porta margin is below -1e-9.
void validate_generator(const Generator& gen, const PolarGrid& grid = {200, 256});

struct FlowResult {
  Complex endpoint;
  long steps = 0;
  double local_error_estimate = 0.0;
};

/// Integrates dz/dt = -f(z) from z0 over [0, t] (Dormand-Prince, absolute tol).
FlowResult flow(const Generator& gen, Complex z0, double t, double tol = 1e-10);

/// The Koenigs function h with h' f = mu h, built by adaptive quadrature.
///   dilation, tau = 0: h(z) = z exp(int_0^z (mu/f - 1/zeta)), h(0)=0, h'(0)=1
///   dilation, tau != 0: the above for the generator conjugated by the
///                       automorphism exchanging 0 and tau
///   hyperbolic:         h(z) = exp(int_0^z mu/f), h(0) = 1
UnivalentMap koenigs(const Generator& gen);

/// max over samples of |h'(z) f(z) - mu h(z)| with h' by central differences.
double koenigs_residual(const UnivalentMap& h, const Generator& gen,
                        std::span<const Complex> samples);

/// max over samples of |h(F_t(z)) - e^{-mu t} h(z)|.
double schroder_residual(const UnivalentMap& h, const Generator& gen, double t,
                         std::span<const Complex> samples, double tol = 1e-10);

struct MarginScan {
  double margin;
  Complex witness;  ///< grid point attaining the margin (0 when Re mu is the minimum)
};
MarginScan spirallike_scan(const UnivalentMap& h, Complex mu, const PolarGrid& grid = {200, 256});

/// min over the grid of Re(mu h(z) / (z h'(z))), with Re mu at z = 0.
/// Requires h(0) = 0.
double spirallike_margin(const UnivalentMap& h, Complex mu, const PolarGrid& grid = {200, 256});

inline constexpr double kMarginAcceptance = -1e-9;

/// Uniform samples in the disk of the given radius.
std::vector<Complex> sample_disk(Rng& rng, std::size_t n, double radius);

}  // namespace spirallab

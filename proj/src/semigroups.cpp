#include "spirallab/semigroups.hpp"

#include <cmath>
#include <limits>

#include "spirallab/ode.hpp"
#include "spirallab/quadrature.hpp"

namespace spirallab {

std::string_view to_string(GeneratorKind kind) {
  return kind == GeneratorKind::dilation ? "dilation" : "hyperbolic";
}

namespace {

Complex poly_derivative(const std::vector<Complex>& c, Complex z, int order) {
  Complex acc = 0.0;
  for (std::size_t k = c.size(); k-- > static_cast<std::size_t>(order);) {
    double factor = 1.0;
    for (int j = 0; j < order; ++j) factor *= static_cast<double>(k - j);
    acc = acc * z + factor * c[k];
  }
  return acc;
}

}  // namespace

Generator Generator::polynomial(std::vector<Complex> coeffs, GeneratorKind kind, Complex tau,
                                Complex mu, std::string name) {
  if (coeffs.empty()) throw Error(ErrorCode::invalid_spec, "polynomial generator has no coefficients");
  Generator g;
  g.name = std::move(name);
  g.kind = kind;
  g.tau = tau;
  g.mu = mu;
  g.coefficients = coeffs;
  g.f = [coeffs](Complex z) { return poly_derivative(coeffs, z, 0); };
  g.df = [coeffs](Complex z) { return poly_derivative(coeffs, z, 1); };
  g.d2f = [coeffs](Complex z) { return poly_derivative(coeffs, z, 2); };
  g.d3f = [coeffs](Complex z) { return poly_derivative(coeffs, z, 3); };
  return g;
}

Complex Generator::second_at_tau() const {
  if (d2f) return d2f(tau);
  const double step = 1e-5;
  return (df(tau + step) - df(tau - step)) / (2.0 * step);
}

std::optional<Complex> Generator::third_at_tau() const {
  if (d3f) return d3f(tau);
  return std::nullopt;
}

Complex generator_quotient(const Generator& gen, Complex x, double eps) {
  if (gen.kind == GeneratorKind::dilation && std::abs(x - gen.tau) < eps) {
    // f = mu d + c2 d^2 + c3 d^3 around tau gives
    // (mu - f')/f = -(2 c2 + 3 c3 d) / (mu + c2 d + c3 d^2).
    const Complex d = x - gen.tau;
    const Complex slope = gen.df(gen.tau);
    const Complex c2 = 0.5 * gen.second_at_tau();
    const Complex c3 = gen.third_at_tau().value_or(0.0) / 6.0;
    return -(2.0 * c2 + 3.0 * c3 * d) / (slope + c2 * d + c3 * d * d);
  }
  const Complex fx = gen.f(x);
  if (std::abs(fx) < 1e-14) {
    throw Error(ErrorCode::unresolved_singularity, "generator vanishes away from its Denjoy-Wolff point");
  }
  return (gen.mu - gen.df(x)) / fx;
}

Generator identity_generator() {
  return Generator::polynomial({0.0, 1.0}, GeneratorKind::dilation, 0.0, 1.0, "identity");
}

Generator logistic_generator() {
  return Generator::polynomial({0.0, 1.0, -1.0}, GeneratorKind::dilation, 0.0, 1.0, "logistic");
}

Generator hyperbolic_square_generator() {
  return Generator::polynomial({-1.0, 0.0, 1.0}, GeneratorKind::hyperbolic, 1.0, 2.0,
                               "hyperbolic_square");
}

double berkson_porta_margin(const Generator& gen, const PolarGrid& grid) {
  const Complex tau = gen.tau;
  double margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid.radial; ++k) {
    for (int j = 0; j < grid.angular; ++j) {
      const Complex z = grid.point(k, j);
      const Complex factor = (z - tau) * (1.0 - std::conj(tau) * z);
      Complex p;
      if (std::abs(z - tau) < 1e-12) {
        p = gen.df(tau) / (1.0 - std::norm(tau));
      } else {
        p = gen.f(z) / factor;
      }
      margin = std::min(margin, p.real());
      if (k == 0) break;  // the centre ring is a single point
    }
  }
  return margin;
}

double angular_derivative_estimate(const Generator& gen) {
  const double r = 1.0 - 1e-4;
  return (gen.f(r * gen.tau) / ((r - 1.0) * gen.tau)).real();
}

void validate_generator(const Generator& gen, const PolarGrid& grid) {
  if (gen.kind == GeneratorKind::dilation) {
    require_in_disk(gen.tau, "dilation Denjoy-Wolff point");
    if (std::abs(gen.f(gen.tau)) > 1e-10) {
      throw Error(ErrorCode::hypothesis_violated, "f(tau) != 0 for a dilation generator");
    }
    if (!(gen.mu.real() > 0.0)) {
      throw Error(ErrorCode::hypothesis_violated, "dilation generator needs Re mu > 0");
    }
  } else {
    if (std::abs(std::abs(gen.tau) - 1.0) > 1e-12) {
      throw Error(ErrorCode::hypothesis_violated, "hyperbolic Denjoy-Wolff point must lie on |z| = 1");
    }
    if (!(gen.mu.real() > 0.0)) {
      throw Error(ErrorCode::hypothesis_violated, "hyperbolic multiplier needs Re mu > 0");
    }
    // mu is user input; it must satisfy |mu - f'(tau)| <= f'(tau), with 5%
    // slack for the difference-quotient estimate of f'(tau).
    const double ang = angular_derivative_estimate(gen);
    if (!(ang > 0.0) || std::abs(gen.mu - ang) > 1.05 * ang) {
      throw Error(ErrorCode::hypothesis_violated,
                  "hyperbolic multiplier incompatible with the angular derivative " + std::to_string(ang));
    }
  }
  const double margin = berkson_porta_margin(gen, grid);
  if (margin < kMarginAcceptance) {
    throw Error(ErrorCode::hypothesis_violated,
                "Berkson-Porta margin " + std::to_string(margin) + " < 0");
  }
}

FlowResult flow(const Generator& gen, Complex z0, double t, double tol) {
  require_in_disk(z0, "flow start");
  if (!(t >= 0.0)) throw Error(ErrorCode::domain, "flow time must be nonnegative");
  DormandPrince solver(OdeOptions{tol, 1'000'000, 1e-3});
  CVec y(1);
  y[0] = z0;
  const auto rhs = [&gen](const CVec& s) {
    CVec d(1);
    d[0] = -gen.f(s[0]);
    return d;
  };
  const auto inside = [](const CVec& s) { return std::abs(s[0]) < 1.0; };
  const auto result = solver.integrate(rhs, y, t, inside);
  if (result.stopped) {
    throw Error(ErrorCode::left_disk, "flow left the disk at t = " + std::to_string(result.time));
  }
  return {result.state[0], result.steps, result.local_error_sum};
}

namespace {

// Koenigs function of a dilation generator with tau = 0.
struct OriginKoenigs {
  std::function<Complex(Complex)> f;
  Complex mu;

  Complex exponent(Complex z) const {
    if (z == 0.0) return 0.0;
    // mu/f(zeta) - 1/zeta along zeta = s z; the 1/zeta pole is removed
    // analytically so the integrand is regular at s = 0.
    auto integrand = [&](double s) { return mu * z / f(s * z) - 1.0 / s; };
    return integrate_gk15(integrand, 0.0, 1.0, 1e-15, 1e-15).value;
  }

  Complex value(Complex z) const { return z * std::exp(exponent(z)); }

  Complex deriv(Complex z) const {
    if (z == 0.0) return 1.0;
    return std::exp(exponent(z)) * (mu * z / f(z));
  }
};

struct BoundaryKoenigs {
  std::function<Complex(Complex)> f;
  Complex mu;

  Complex value(Complex z) const {
    if (z == 0.0) return 1.0;
    auto integrand = [&](double s) { return mu * z / f(s * z); };
    return std::exp(integrate_gk15(integrand, 0.0, 1.0, 1e-15, 1e-15).value);
  }

  Complex deriv(Complex z) const { return mu * value(z) / f(z); }
};

// d -> f(tau + d) for a dilation generator, with f(tau) = 0 imposed.
// Polynomials are re-expanded about tau; otherwise a cubic Taylor model is
// used for |d| < 1e-3.
std::function<Complex(Complex)> centred_generator(const Generator& gen) {
  if (!gen.coefficients.empty()) {
    const auto& c = gen.coefficients;
    std::vector<Complex> b(c.size(), 0.0);
    // Repeated synthetic division by (z - tau).
    std::vector<Complex> work = c;
    for (std::size_t k = 0; k < c.size(); ++k) {
      Complex acc = 0.0;
      for (std::size_t j = work.size(); j-- > k;) {
        acc = acc * gen.tau + work[j];
        work[j] = acc;
      }
      b[k] = work[k];
    }
    b[0] = 0.0;
    return [b](Complex d) {
      Complex acc = 0.0;
      for (std::size_t j = b.size(); j-- > 0;) acc = acc * d + b[j];
      return acc;
    };
  }
  const Complex c1 = gen.df(gen.tau);
  const Complex c2 = 0.5 * gen.second_at_tau();
  const Complex c3 = gen.third_at_tau().value_or(0.0) / 6.0;
  return [f = gen.f, tau = gen.tau, c1, c2, c3](Complex d) {
    if (std::abs(d) < 1e-3) return d * (c1 + d * (c2 + d * c3));
    return f(tau + d);
  };
}

}  // namespace

UnivalentMap koenigs(const Generator& gen) {
  AnalyticFunction fn;
  fn.name = "koenigs(" + gen.name + ")";
  // Differentiating h' f = mu h gives h'' = h' (mu - f') / f.
  auto attach_second = [&gen](AnalyticFunction& target) {
    auto deriv = target.deriv;
    target.second_deriv = [deriv, gen](Complex z) { return deriv(z) * generator_quotient(gen, z); };
  };
  if (gen.kind == GeneratorKind::hyperbolic) {
    BoundaryKoenigs k{gen.f, gen.mu};
    fn.value = [k](Complex z) { return k.value(z); };
    fn.deriv = [k](Complex z) { return k.deriv(z); };
    attach_second(fn);
    return UnivalentMap::custom(std::move(fn)).with_spiral_multiplier(gen.mu);
  }
  require_in_disk(gen.tau, "koenigs tau");
  if (gen.tau == 0.0) {
    OriginKoenigs k{gen.f, gen.mu};
    fn.value = [k](Complex z) { return k.value(z); };
    fn.deriv = [k](Complex z) { return k.deriv(z); };
    attach_second(fn);
    return UnivalentMap::custom(std::move(fn)).with_spiral_multiplier(gen.mu);
  }
  // Conjugate by phi (phi o phi = id, phi(tau) = 0): the flow u = phi(z)
  // solves du/dt = -phi'(phi(u)) f(phi(u)), a generator fixing 0 with the same mu.
  // With s = 1 - |tau|^2 and e = 1 - conj(tau) u this is -(e^2/s) f(tau + d),
  // d = phi(u) - tau = -u s / e; f is evaluated in powers of d to keep the
  // simple zero at u = 0 free of cancellation.
  const DiskAutomorphism phi(gen.tau);
  auto centred = centred_generator(gen);
  auto conjugated = [centred, tau = gen.tau](Complex u) {
    const double s = 1.0 - std::norm(tau);
    const Complex e = 1.0 - std::conj(tau) * u;
    return -(e * e / s) * centred(-u * s / e);
  };
  OriginKoenigs k{conjugated, gen.mu};
  fn.value = [k, phi](Complex z) { return k.value(phi(z)); };
  fn.deriv = [k, phi](Complex z) { return k.deriv(phi(z)) * phi.deriv(z); };
  attach_second(fn);
  return UnivalentMap::custom(std::move(fn)).with_spiral_multiplier(gen.mu);
}

double koenigs_residual(const UnivalentMap& h, const Generator& gen,
                        std::span<const Complex> samples) {
  double worst = 0.0;
  for (Complex z : samples) {
    const double step = std::min(1e-5, 0.25 * (1.0 - std::abs(z)));
    const Complex dh = (h.value(z + step) - h.value(z - step) +
                        kI * (h.value(z - kI * step) - h.value(z + kI * step))) /
                       (4.0 * step);
    worst = std::max(worst, std::abs(dh * gen.f(z) - gen.mu * h.value(z)));
  }
  return worst;
}

double schroder_residual(const UnivalentMap& h, const Generator& gen, double t,
                         std::span<const Complex> samples, double tol) {
  const Complex beta = std::exp(-gen.mu * t);
  double worst = 0.0;
  for (Complex z : samples) {
    const Complex moved = flow(gen, z, t, tol).endpoint;
    worst = std::max(worst, std::abs(h.value(moved) - beta * h.value(z)));
  }
  return worst;
}

MarginScan spirallike_scan(const UnivalentMap& h, Complex mu, const PolarGrid& grid) {
  if (std::abs(h.value(0.0)) > 1e-12) {
    throw Error(ErrorCode::domain, "spirallike_margin requires h(0) = 0");
  }
  MarginScan scan{mu.real(), 0.0};
  for (int k = 1; k < grid.radial; ++k) {
    for (int j = 0; j < grid.angular; ++j) {
      const Complex z = grid.point(k, j);
      const double q = (mu * h.value_unchecked(z) / (z * h.deriv_unchecked(z))).real();
      if (q < scan.margin) scan = {q, z};
    }
  }
  return scan;
}

double spirallike_margin(const UnivalentMap& h, Complex mu, const PolarGrid& grid) {
  return spirallike_scan(h, mu, grid).margin;
}

std::vector<Complex> sample_disk(Rng& rng, std::size_t n, double radius) {
  std::vector<Complex> out(n);
  for (auto& z : out) z = rng.in_disk(radius);
  return out;
}

}  // namespace spirallab

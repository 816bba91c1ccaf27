#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "spirallab/semigroups.hpp"
#include "support.hpp"

using namespace spirallab;
using doctest::Approx;
using test::near;

namespace {

std::vector<Generator> built_in_generators() {
  return {identity_generator(), logistic_generator(), hyperbolic_square_generator()};
}

Generator negated_identity() {
  return Generator::polynomial({0.0, -1.0}, GeneratorKind::dilation, 0.0, -1.0, "minus_identity");
}

// f(z) = z(1 + z/2) with tau = 0.5 moved in by conjugation is awkward to
// write down; z - 0.3 (1 - 0.3 z) p with p = 1 is simpler and has tau = 0.3.
Generator shifted_generator() {
  const double a = 0.3;
  // (z - a)(1 - a z) = -a + (1 + a^2) z - a z^2
  return Generator::polynomial({-a, 1.0 + a * a, -a}, GeneratorKind::dilation, a, 1.0 - a * a, "shifted");
}

}  // namespace

TEST_CASE("Berkson-Porta margin") {
  CHECK(berkson_porta_margin(identity_generator()) == Approx(1.0));
  CHECK(berkson_porta_margin(negated_identity()) == Approx(-1.0));
  const double logistic = berkson_porta_margin(logistic_generator());
  CHECK(logistic >= 0.0);
  CHECK(logistic < 1e-3);
  CHECK(berkson_porta_margin(shifted_generator()) == Approx(1.0));
  CHECK_NOTHROW(validate_generator(logistic_generator()));
  CHECK_NOTHROW(validate_generator(hyperbolic_square_generator()));
  CHECK_THROWS_AS(validate_generator(negated_identity()), Error);
}

TEST_CASE("angular derivative of the hyperbolic generator") {
  const auto g = hyperbolic_square_generator();
  CHECK(angular_derivative_estimate(g) == Approx(2.0).epsilon(1e-3));
  auto bad = g;
  bad.mu = 5.0;
  CHECK_THROWS_AS(validate_generator(bad), Error);
  // Other multipliers with |mu - f'(tau)| <= f'(tau) are admissible.
  auto other = g;
  other.mu = 1.0;
  CHECK_NOTHROW(validate_generator(other));
}

TEST_CASE("flow examples") {
  CHECK(near(flow(identity_generator(), 0.4, std::log(2.0)).endpoint, 0.2, 1e-9));
  CHECK(near(flow(logistic_generator(), 0.5, std::log(2.0)).endpoint, 1.0 / 3.0, 1e-9));
  CHECK(near(flow(hyperbolic_square_generator(), 0.0, 1.0).endpoint, std::tanh(1.0), 1e-9));
  CHECK(near(flow(logistic_generator(), 0.5, 0.0).endpoint, 0.5, 0.0));
  CHECK_THROWS_AS(flow(logistic_generator(), 1.5, 1.0), Error);
  CHECK_THROWS_AS(flow(logistic_generator(), 0.5, -1.0), Error);
}

TEST_CASE("flow escaping the disk is reported") {
  // dz/dt = z pushes every nonzero point out of the disk.
  try {
    flow(negated_identity(), 0.5, 2.0);
    FAIL("expected left_disk");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::left_disk);
  }
}

TEST_CASE("semigroup law") {
  Rng rng(31);
  for (const auto& g : built_in_generators()) {
    CAPTURE(g.name);
    for (int i = 0; i < 100; ++i) {
      const Complex z = rng.in_disk(0.9);
      const double t = rng.uniform(0.0, 2.0), s = rng.uniform(0.0, 2.0);
      const Complex whole = flow(g, z, t + s).endpoint;
      const Complex split = flow(g, flow(g, z, s).endpoint, t).endpoint;
      CHECK(std::abs(whole - split) <= 1e-7);
    }
  }
}

TEST_CASE("generator recovery from the flow") {
  Rng rng(32);
  const double delta = 1e-4;
  for (const auto& g : built_in_generators()) {
    for (int i = 0; i < 100; ++i) {
      const Complex z = rng.in_disk(0.9);
      const Complex quotient = (z - flow(g, z, delta).endpoint) / delta;
      CHECK(std::abs(quotient - g.f(z)) <= 1e-3 * (1.0 + std::abs(g.f(z))));
    }
  }
}

TEST_CASE("Koenigs maps of the built-in generators") {
  Rng rng(33);
  const auto samples = sample_disk(rng, 400, 0.95);

  const auto id = koenigs(identity_generator());
  for (Complex z : samples) CHECK(near(id.value(z), z, 1e-12));

  const auto log_h = koenigs(logistic_generator());
  double worst = 0.0;
  for (Complex z : samples) worst = std::max(worst, std::abs(log_h.value(z) - z / (1.0 - z)));
  CHECK(worst <= 1e-8);

  const auto hyp = koenigs(hyperbolic_square_generator());
  CHECK(near(hyp.value(0.0), 1.0, 0.0));
  worst = 0.0;
  for (Complex z : samples) worst = std::max(worst, std::abs(hyp.value(z) - (1.0 - z) / (1.0 + z)));
  CHECK(worst <= 1e-8);

  for (const auto& g : built_in_generators()) {
    CHECK(koenigs_residual(koenigs(g), g, samples) <= 1e-8 * 100.0);
  }
}

TEST_CASE("Koenigs map for an interior Denjoy-Wolff point off the origin") {
  const auto g = shifted_generator();
  validate_generator(g);
  const auto h = koenigs(g);
  CHECK(std::abs(h.value(g.tau)) < 1e-14);
  Rng rng(34);
  const auto samples = sample_disk(rng, 200, 0.9);
  CHECK(koenigs_residual(h, g, samples) <= 1e-8);
  CHECK(schroder_residual(h, g, 0.7, samples) <= 1e-6);
}

TEST_CASE("Koenigs second derivative matches differences of h'") {
  Rng rng(35);
  for (const auto& g : {logistic_generator(), hyperbolic_square_generator(), shifted_generator()}) {
    CAPTURE(g.name);
    const auto h = koenigs(g);
    for (int i = 0; i < 100; ++i) {
      const Complex z = rng.in_disk(0.8);
      const double step = 1e-5;
      const Complex fd = (h.deriv(z + step) - h.deriv(z - step)) / (2.0 * step);
      CHECK(std::abs(h.second_deriv(z) - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
    }
    // tau itself goes through the Taylor model of the quotient.
    if (g.kind == GeneratorKind::dilation) {
      const Complex fd = (h.deriv(g.tau + 1e-5) - h.deriv(g.tau - 1e-5)) / 2e-5;
      CHECK(std::abs(h.second_deriv(g.tau) - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("Schroder equation") {
  Rng rng(36);
  const auto samples = sample_disk(rng, 500, 0.9);
  CHECK(schroder_residual(UnivalentMap::identity(), identity_generator(), 1.3, samples) <= 1e-9);
  const auto lg = logistic_generator();
  AnalyticFunction exact{"z/(1-z)", [](Complex z) { return z / (1.0 - z); },
                         [](Complex z) { return 1.0 / ((1.0 - z) * (1.0 - z)); }, {}};
  CHECK(schroder_residual(UnivalentMap::custom(exact), lg, 1.0, samples) <= 1e-7);
  CHECK(schroder_residual(UnivalentMap::half_plane(), hyperbolic_square_generator(), 0.5, samples) <= 1e-7);

  for (const auto& g : built_in_generators()) {
    const auto h = koenigs(g);
    for (double t : {0.25, 1.0, 3.0}) {
      CAPTURE(g.name);
      CAPTURE(t);
      CHECK(schroder_residual(h, g, t, std::span(samples).first(100)) <= 1e-6);
    }
  }
}

TEST_CASE("spirallike margin") {
  AnalyticFunction exact{"z/(1-z)", [](Complex z) { return z / (1.0 - z); },
                         [](Complex z) { return 1.0 / ((1.0 - z) * (1.0 - z)); }, {}};
  const double m1 = spirallike_margin(UnivalentMap::custom(exact), 1.0);
  CHECK(m1 >= kMarginAcceptance);
  CHECK(m1 < 1e-3);
  CHECK(spirallike_margin(UnivalentMap::koebe(), 1.0) >= kMarginAcceptance);

  const Complex mu{1.0, 1.0};
  const Complex c{0.0, 0.5};
  const double expected = mu.real() - std::abs(mu) * std::abs(c);
  const double m = spirallike_margin(UnivalentMap::mobius_spiral(c), mu);
  CHECK(m > 0.0);
  CHECK(m == Approx(expected).epsilon(1e-3));

  const auto scan = spirallike_scan(UnivalentMap::mobius_spiral(0.9), {1.0, 3.0});
  CHECK(scan.margin < 0.0);
  CHECK(std::abs(scan.witness) > 0.0);
  CHECK_THROWS_AS(spirallike_margin(UnivalentMap::half_plane(), 1.0), Error);
}

TEST_CASE("spiral_koebe multiplier found by the margin oracle") {
  const double theta = 0.6;
  const auto h = UnivalentMap::spiral_koebe(theta);
  const Complex mu = std::polar(1.0, -theta);
  CHECK(spirallike_margin(h, mu) >= kMarginAcceptance);
  CHECK(spirallike_margin(h, std::conj(mu)) < kMarginAcceptance);
}

TEST_CASE("Koenigs maps of valid generators are spirallike") {
  for (const auto& g : {identity_generator(), logistic_generator()}) {
    REQUIRE(berkson_porta_margin(g) >= kMarginAcceptance);
    CHECK(spirallike_margin(koenigs(g), g.mu, {60, 64}) >= kMarginAcceptance);
  }
  const auto spiral = Generator::polynomial({0.0, {1.0, 1.0}, {-0.3, 0.0}}, GeneratorKind::dilation, 0.0,
                                            {1.0, 1.0}, "spiral");
  REQUIRE(berkson_porta_margin(spiral) >= kMarginAcceptance);
  CHECK(spirallike_margin(koenigs(spiral), spiral.mu, {60, 64}) >= kMarginAcceptance);
}

TEST_CASE("generator quotient near tau is continuous") {
  const auto g = logistic_generator();
  // (mu - f')/f = 2/(1 - x) exactly for the logistic generator.
  for (double x : {0.0, 0.5e-4, 0.99e-4, 1.01e-4, 0.3}) {
    CHECK(near(generator_quotient(g, x), 2.0 / (1.0 - x), 1e-9));
  }
  const auto s = shifted_generator();
  double worst = 0.0;
  for (int k = -50; k <= 50; ++k) {
    const Complex x = s.tau + Complex(1.02e-4 * k / 50.0, 0.3e-4);
    const Complex y = x + Complex(1e-9, 0.0);
    worst = std::max(worst, std::abs(generator_quotient(s, x) - generator_quotient(s, y)));
  }
  CHECK(worst <= 1e-6);
  CHECK_THROWS_AS(generator_quotient(Generator::polynomial({0.0, 1.0, -2.0}, GeneratorKind::dilation, 0.0, 1.0),
                                     0.5),
                  Error);
}

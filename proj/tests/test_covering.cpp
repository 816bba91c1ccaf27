#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "spirallab/covering.hpp"
#include "spirallab/random.hpp"
#include "support.hpp"

using namespace spirallab;
using doctest::Approx;

TEST_CASE("omega membership") {
  const auto id = UnivalentMap::identity();
  const auto spec = OmegaSpec::make(id, 0.0, 0.19);
  CHECK(spec.threshold == Approx(0.19));
  CHECK(omega_contains(id, spec, 0.5));
  CHECK_FALSE(omega_contains(id, spec, 0.95));
  const auto k = UnivalentMap::koebe();
  CHECK(omega_contains(k, OmegaSpec::make(k, 0.0, 0.5), 0.0));
  CHECK_THROWS_AS(OmegaSpec::make(id, 0.0, 1.0), Error);
  CHECK_THROWS_AS(OmegaSpec::make(id, 0.0, 0.0), Error);
}

TEST_CASE("polar grid concentrates near the boundary") {
  const PolarGrid g{10, 8};
  CHECK(g.radius(0) == 0.0);
  CHECK(g.radius(10) == 1.0);
  CHECK(g.radius(9) - g.radius(8) < g.radius(1) - g.radius(0));
}

TEST_CASE("covered radius of the identity") {
  const auto id = UnivalentMap::identity();
  const auto est = covered_radius_estimate(id, OmegaSpec::make(id, 0.0, 0.19), 0.0, {});
  // Complement is |x| >= 0.9; the grid's first ring past 0.9 sits at 0.900775.
  CHECK(est.radius == Approx(0.900775).epsilon(1e-5));
  CHECK_FALSE(est.complement_empty);
  CHECK(std::abs(est.witness) == Approx(est.radius));
  const auto tiny = covered_radius_estimate(id, OmegaSpec::make(id, 0.0, 0.999), 0.0, {});
  CHECK(tiny.radius < 0.04);
}

TEST_CASE("covering radius examples") {
  const auto id = verify_theorem1(UnivalentMap::identity(), 0.0, 0.19);
  CHECK(id.predicted_radius == Approx(0.2025));
  CHECK(id.measured_radius_lower == Approx(0.900775).epsilon(1e-5));
  CHECK(id.pass);

  const auto k = verify_theorem1(UnivalentMap::koebe(), 0.0, 0.5);
  CHECK(k.predicted_radius == Approx(0.125));
  CHECK(k.measured_radius_lower == Approx(0.1251684).epsilon(1e-6));
  CHECK(k.tolerance == Approx(grid_tolerance(0.125)));
  CHECK(k.pass);

  const auto degenerate = verify_theorem1(UnivalentMap::koebe(), 0.3, 0.999);
  CHECK(degenerate.predicted_radius < 1e-3);
  CHECK(degenerate.pass);
}

TEST_CASE("beta covering examples") {
  const auto id = verify_theorem2(UnivalentMap::identity(), 0.0, 0.3, 0.5);
  REQUIRE(id.x1);
  CHECK(std::abs(*id.x1) < 1e-15);
  CHECK(id.predicted_radius == Approx(0.1));
  CHECK(*id.secondary_bound == Approx(0.05));
  CHECK(id.measured_radius_lower == Approx(0.83799).epsilon(1e-4));
  CHECK(id.pass);

  const auto k = verify_theorem2(UnivalentMap::koebe(), 0.3, 0.2, std::exp(-1.0));
  CHECK(k.x1->real() == Approx(0.1592194).epsilon(1e-6));
  CHECK(k.predicted_radius == Approx(0.2168692).epsilon(1e-6));
  CHECK(*k.secondary_bound == Approx(0.1447532).epsilon(1e-6));
  CHECK(k.measured_radius_lower == Approx(0.3028466).epsilon(1e-5));
  CHECK(k.pass);

  const double beta = std::exp(-0.5);
  const auto m = verify_theorem2(UnivalentMap::mobius_spiral(0.3), 0.0, 0.1, beta);
  CHECK(std::abs(*m.x1) < 1e-15);
  CHECK(m.predicted_radius == Approx((beta - 0.1) / (4.0 * beta)));
  CHECK(m.pass);

  CHECK_THROWS_AS(verify_theorem2(UnivalentMap::identity(), 0.0, 0.6, 0.5), Error);
}

TEST_CASE("measured radius is non-increasing in alpha") {
  for (const auto& h : {UnivalentMap::koebe(), UnivalentMap::mobius_spiral(0.3)}) {
    for (Complex x0 : {Complex(0.0), Complex(0.3), Complex(0.0, 0.5)}) {
      double prev = 1e300;
      for (int i = 1; i <= 9; ++i) {
        const auto rep = verify_theorem1(h, x0, 0.1 * i, {200, 200});
        CHECK(rep.measured_radius_lower <= prev + 1e-12);
        prev = rep.measured_radius_lower;
      }
    }
  }
}

TEST_CASE("omega and its transformed region agree") {
  Rng rng(21);
  long mismatches = 0;
  for (const auto& h : test::built_in_families()) {
    for (int i = 0; i < 1000; ++i) {
      const Complex x0 = rng.in_disk(0.8);
      const double alpha = rng.uniform(0.05, 0.95);
      const Complex x = rng.in_disk(0.99);
      const auto spec = OmegaSpec::make(h, x0, alpha);
      const bool a = omega_contains(h, spec, x);
      const bool b = omega_tilde_contains(normalize_at(h, x0), alpha, disk_automorphism(x0, x));
      if (a != b) {
        // Only points on the level set itself may disagree by rounding.
        const double lhs = std::abs(h.deriv(x)) * (1.0 - std::norm(x));
        if (std::abs(lhs - spec.threshold) > 1e-9 * spec.threshold) ++mismatches;
      }
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("beta bound dominates the secondary bound") {
  Rng rng(22);
  const auto k = UnivalentMap::koebe();
  for (int i = 0; i < 50; ++i) {
    const Complex x0 = rng.in_disk(0.6);
    const double beta = std::exp(-rng.uniform(0.1, 2.0));
    const auto rep = verify_theorem2(k, x0, 0.5 * beta, beta, {100, 100});
    CHECK(rep.predicted_radius >= *rep.secondary_bound - 1e-12);
  }
}

TEST_CASE("region sampling covers the grid") {
  const auto h = UnivalentMap::koebe();
  const PolarGrid grid{20, 16};
  const auto samples = sample_region(h, OmegaSpec::make(h, 0.0, 0.5), grid);
  CHECK(samples.size() >= 20u * 16u);
  bool any_in = false, any_out = false;
  for (const auto& s : samples) (s.in_omega ? any_in : any_out) = true;
  CHECK(any_in);
  CHECK(any_out);
}

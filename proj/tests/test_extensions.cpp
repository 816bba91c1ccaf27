#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "spirallab/extensions.hpp"
#include "support.hpp"

using namespace spirallab;
using doctest::Approx;
using test::near;

namespace {

CVec vec(std::initializer_list<Complex> values) {
  CVec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (Complex c : values) v[i++] = c;
  return v;
}

HomogeneousPolynomial y1y2() { return {2, 2, {{{1, 1}, 1.0}}}; }

CVec random_vec(Rng& rng, int m, double scale) {
  CVec v(m);
  for (int j = 0; j < m; ++j) v[j] = scale * rng.complex_normal();
  return v;
}

}  // namespace

TEST_CASE("ball membership") {
  const BallSpace s2(2.0, 1);
  CHECK(ball_contains(s2, {0.0, vec({0.0})}));
  CHECK_FALSE(ball_contains(s2, {0.6, vec({0.8})}));
  const BallSpace s3(3.0, 2);
  CHECK(s3.gauge(0.5, vec({0.5, 0.5})) == Approx(0.6035534).epsilon(1e-7));
  CHECK(ball_contains(s3, {0.5, vec({0.5, 0.5})}));
  CHECK(BallSpace(2.0, 2, NormKind::sup).y_norm(vec({0.3, {0.0, -0.7}})) == Approx(0.7));
  CHECK(BallSpace(2.0, 2, NormKind::p_norm, 1.0).y_norm(vec({0.3, {0.0, -0.7}})) == Approx(1.0));
  CHECK_THROWS_AS(BallSpace(0.5, 1), Error);
  CHECK_THROWS_AS(BallSpace(2.0, 0), Error);
}

TEST_CASE("homogeneous polynomials") {
  CHECK_THROWS_AS(HomogeneousPolynomial(2, 1, {{{3}, 1.0}}), Error);
  CHECK_THROWS_AS(HomogeneousPolynomial(2, 2, {{{2}, 1.0}}), Error);
  const auto q = y1y2();
  CHECK(near(q(vec({2.0, 3.0})), 6.0, 1e-15));
  const auto g = q.gradient(vec({2.0, 3.0}));
  CHECK(near(g[0], 3.0, 1e-15));
  CHECK(near(g[1], 2.0, 1e-15));
  CHECK(HomogeneousPolynomial::zero(2, 1).is_zero());

  Rng rng(41);
  const HomogeneousPolynomial cubic(3, 2, {{{3, 0}, {1.0, 2.0}}, {{1, 2}, -0.5}, {{0, 3}, {0.0, 0.25}}});
  for (int i = 0; i < 200; ++i) {
    const CVec y = random_vec(rng, 2, 1.0);
    const Complex c = rng.complex_normal();
    CHECK(std::abs(cubic(c * y) - std::pow(c, 3) * cubic(y)) <= 1e-12 * (1.0 + std::abs(cubic(c * y))));
    // Euler's identity for homogeneous polynomials: y . grad Q = r Q.
    CHECK(near(cubic.gradient(y).cwiseProduct(y).sum(), 3.0 * cubic(y), 1e-12 * (1.0 + std::abs(cubic(y)))));
  }
}

TEST_CASE("extension operator") {
  const BallSpace s(2.0, 1);
  const auto k = UnivalentMap::koebe();
  const auto img = extend_H(k, s, {0.5, vec({1.0})});
  CHECK(near(img.x, 2.0, 1e-13));
  CHECK(near(img.y[0], std::sqrt(12.0), 1e-12));
  const auto zero_fiber = extend_H(k, s, {0.3, vec({0.0})});
  CHECK(near(zero_fiber.x, k.value(0.3), 1e-15));
  CHECK(zero_fiber.y[0] == 0.0);
  const auto id = extend_H(UnivalentMap::identity(), s, {{0.1, 0.2}, vec({0.4})});
  CHECK(near(id.x, {0.1, 0.2}, 1e-16));
  CHECK(near(id.y[0], 0.4, 1e-16));
}

TEST_CASE("shear extension") {
  const BallSpace s(2.0, 1);
  const auto k = UnivalentMap::koebe();
  const auto img = muir_extend(k, s, HomogeneousPolynomial::first_power(0.25, 2, 1), {0.5, vec({1.0})});
  CHECK(near(img.x, 5.0, 1e-12));
  CHECK(near(img.y[0], std::sqrt(12.0), 1e-12));

  const BallSpace s22(2.0, 2);
  const auto id = muir_extend(UnivalentMap::identity(), s22, y1y2(), {0.0, vec({0.3, 0.4})});
  CHECK(near(id.x, 0.12, 1e-16));
  CHECK_THROWS_AS(muir_extend(k, s, HomogeneousPolynomial::first_power(1.0, 3, 1), {0.0, vec({0.1})}), Error);

  Rng rng(42);
  for (const auto& h : test::built_in_families()) {
    for (int i = 0; i < 100; ++i) {
      const auto p = sample_ball_point(rng, s22, 1e-3);
      const auto a = muir_extend(h, s22, y1y2(), p);
      const auto b = automorphism_phi(y1y2(), extend_H(h, s22, p));
      CHECK(std::abs(a.x - b.x) <= 1e-14 * std::max(1.0, std::abs(a.x)));
      CHECK((a.y - b.y).norm() == 0.0);
    }
  }
}

TEST_CASE("shear automorphism") {
  const auto q = HomogeneousPolynomial::first_power(1.0, 2, 1);
  const auto f = automorphism_phi(q, {1.0, vec({2.0})});
  CHECK(near(f.x, 5.0, 0.0));
  const auto zero = automorphism_phi(HomogeneousPolynomial::zero(2, 1), {{0.3, 0.1}, vec({2.0})});
  CHECK(zero.x == Complex(0.3, 0.1));
  Rng rng(43);
  for (int i = 0; i < 100; ++i) {
    const BallPoint p{rng.complex_normal(), random_vec(rng, 2, 1.0)};
    const auto back = automorphism_phi_inverse(y1y2(), automorphism_phi(y1y2(), p));
    CHECK(std::abs(back.x - p.x) <= 1e-14 * (1.0 + std::abs(p.x) + std::norm(p.y[0]) + std::norm(p.y[1])));
    CHECK(back.y == p.y);
  }
}

TEST_CASE("spiral semigroup action") {
  const SpiralMatrix a(1.0, 1.0, 2.0);
  const BallPoint p{{0.3, 0.2}, vec({0.4, {0.1, -0.1}})};
  const auto same = semigroup_action(a, 0.0, p);
  CHECK(same.x == p.x);
  CHECK(same.y == p.y);
  const auto half = semigroup_action(a, std::log(2.0), p);
  CHECK(near(half.x, 0.5 * p.x, 1e-16));
  CHECK(near(half.y[0], std::pow(2.0, -1.5) * p.y[0], 1e-16));

  Rng rng(44);
  const SpiralMatrix b({1.0, 2.0}, {0.5, -3.0}, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double t = rng.uniform(0.0, 3.0), s = rng.uniform(0.0, 3.0);
    const auto lhs = semigroup_action(b, t + s, p);
    const auto rhs = semigroup_action(b, t, semigroup_action(b, s, p));
    CHECK(std::abs(lhs.x - rhs.x) <= 1e-14);
    CHECK((lhs.y - rhs.y).norm() <= 1e-14);
  }
  CHECK_THROWS_AS(SpiralMatrix(1.0, {-1.0, 0.0}, 2.0), Error);
}

TEST_CASE("conjugated starlike action") {
  const auto q = HomogeneousPolynomial::first_power(1.0, 2, 1);
  const auto moved = conjugated_action(q, std::log(2.0), {0.0, vec({1.0})});
  CHECK(near(moved.x, 0.25, 1e-16));
  CHECK(near(moved.y[0], 0.5, 1e-16));
  const BallPoint p{{0.2, 0.1}, vec({0.3, 0.5})};
  const auto same = conjugated_action(y1y2(), 0.0, p);
  CHECK(same.x == p.x);

  Rng rng(45);
  const SpiralMatrix g(1.0, 0.5, 2.0);  // diag(e^-t, e^-t)
  for (int i = 0; i < 100; ++i) {
    const double t = rng.uniform(0.0, 3.0), s = rng.uniform(0.0, 3.0);
    const BallPoint z{rng.in_disk(), random_vec(rng, 2, 0.5)};
    const auto lhs = conjugated_action(y1y2(), t + s, z);
    const auto rhs = conjugated_action(y1y2(), t, conjugated_action(y1y2(), s, z));
    CHECK(std::abs(lhs.x - rhs.x) <= 1e-14);
    CHECK((lhs.y - rhs.y).norm() <= 1e-14);
    const auto via = automorphism_phi_inverse(y1y2(), semigroup_action(g, t, automorphism_phi(y1y2(), z)));
    CHECK(std::abs(conjugated_action(y1y2(), t, z).x - via.x) <= 1e-14);
  }
  CHECK_THROWS_AS(conjugated_action(HomogeneousPolynomial::first_power(1.0, 3, 1), 1.0, {0.0, vec({0.1})}),
                  Error);
}

TEST_CASE("image membership") {
  const BallSpace s(2.0, 1);
  const auto k = UnivalentMap::koebe();
  CHECK(membership_H(k, s, {2.0, vec({1.0})}));
  CHECK_FALSE(membership_H(k, s, {2.0, vec({3.0})}));
  CHECK_FALSE(membership_H(k, s, {-1.0, vec({0.0})}));  // outside k(disk)
  CHECK(membership_H(UnivalentMap::identity(), s, {0.6, vec({0.79})}));
  CHECK_FALSE(membership_H(UnivalentMap::identity(), s, {0.6, vec({0.81})}));

  Rng rng(46);
  const BallSpace s3(3.0, 2);
  for (const auto& h : test::built_in_families()) {
    for (int i = 0; i < 100; ++i) {
      const auto p = sample_ball_point(rng, s3, 1e-3);
      CHECK(membership_H(h, s3, extend_H(h, s3, p), p.x));
    }
  }
}

TEST_CASE("covering radius R_t") {
  const auto id = UnivalentMap::identity();
  for (double t : {0.1, 1.0, 3.0}) {
    CHECK(covering_radius_Rt(id, 1.0, 1.0, 2.0, t, 0.0) == Approx((1.0 - std::exp(-2.0 * t)) / 4.0));
  }
  CHECK(covering_radius_Rt(UnivalentMap::koebe(), 1.0, 1.0, 2.0, 0.0, 2.0) == 0.0);
  const double x1 = (3.0 - std::sqrt(5.0)) / 2.0;
  const double kd = (1.0 + x1) / std::pow(1.0 - x1, 3);
  CHECK(covering_radius_Rt(UnivalentMap::koebe(), 1.0, 1.0, 2.0, std::log(2.0), 2.0) ==
        Approx(0.75 / 4.0 * kd * (1.0 - x1 * x1)).epsilon(1e-12));
}

TEST_CASE("sup norm of Q on the sphere") {
  const BallSpace s1(2.0, 1), s2(2.0, 2), s3(3.0, 3);
  CHECK(sup_norm_Q(HomogeneousPolynomial::zero(2, 1), s1).value == 0.0);
  CHECK(sup_norm_Q(HomogeneousPolynomial::first_power(1.0, 2, 2), s2).value == Approx(1.0).epsilon(1e-9));
  CHECK(sup_norm_Q(HomogeneousPolynomial::first_power(1.0, 3, 3), s3).value == Approx(1.0).epsilon(1e-9));
  const auto e = sup_norm_Q(y1y2(), s2);
  CHECK(e.value == Approx(0.5).epsilon(1e-9));
  CHECK(e.samples == 100'000);
  CHECK(std::abs(std::abs(e.maximizer[0]) - std::abs(e.maximizer[1])) < 1e-4);
  // Sup norm on C^2: |y1 y2| <= max(|y1|,|y2|)^2 = 1 at (1, 1), a corner of
  // the sphere where the ascent converges slowly.
  CHECK(sup_norm_Q(y1y2(), BallSpace(2.0, 2, NormKind::sup)).value == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("sampled ball points are interior") {
  Rng rng(47);
  for (double r : {1.0, 2.0, 3.5}) {
    const BallSpace s(r, 3);
    for (int i = 0; i < 500; ++i) CHECK(s.gauge(sample_ball_point(rng, s, 1e-3).x, sample_ball_point(rng, s, 1e-3).y) < 2.0);
    for (int i = 0; i < 500; ++i) {
      const auto p = sample_ball_point(rng, s, 1e-3);
      CHECK(s.gauge(p.x, p.y) <= 1.0 - 1e-3 + 1e-15);
    }
  }
}

TEST_CASE("invariance under the spiral semigroup") {
  InvarianceOptions opt;
  opt.samples = 1000;
  opt.gamma_samples = 200;
  const BallSpace s(2.0, 1);
  const auto lin = verify_invariance(UnivalentMap::identity(), {1.0, 0.5}, {2.0, 1.0}, s,
                                     HomogeneousPolynomial::zero(2, 1), opt);
  CHECK(lin.pass);
  CHECK(lin.main_failures == 0);

  const auto k = verify_invariance(UnivalentMap::koebe(), 1.0, 1.0, s, HomogeneousPolynomial::first_power(0.25, 2, 1),
                                   opt);
  CHECK(k.pass);
  CHECK(k.muir_bound == Approx(0.25));
  CHECK(k.muir_bound_satisfied);
  CHECK(k.remark2_violations == 0);
  CHECK(k.muir_checks == 1000 * 5);

  const auto bad = verify_invariance(UnivalentMap::koebe(), 1.0, {1.0, 10.0}, s,
                                     HomogeneousPolynomial::first_power(0.25, 2, 1), opt);
  CHECK_FALSE(bad.muir_bound_satisfied);
  CHECK(bad.muir_bound == Approx(0.25 / std::sqrt(101.0)));
  CHECK(bad.muir_failures > 0);
  CHECK_FALSE(bad.witnesses.empty());

  const auto pre = verify_invariance(UnivalentMap::koebe(), 1.0, {-1.0, 0.0}, s, HomogeneousPolynomial::zero(2, 1), opt);
  CHECK_FALSE(pre.precondition_ok);
  CHECK_FALSE(pre.pass);
}

TEST_CASE("invariance runs are reproducible") {
  InvarianceOptions opt;
  opt.samples = 300;
  opt.gamma_samples = 50;
  opt.seed = 7;
  const BallSpace s(2.0, 2);
  const auto q = HomogeneousPolynomial::first_power(0.25, 2, 2);
  const auto a = verify_invariance(UnivalentMap::koebe(), 1.0, {1.0, 10.0}, s, q, opt);
  const auto b = verify_invariance(UnivalentMap::koebe(), 1.0, {1.0, 10.0}, s, q, opt);
  CHECK(a.muir_failures == b.muir_failures);
  REQUIRE(a.witnesses.size() == b.witnesses.size());
  for (std::size_t i = 0; i < a.witnesses.size(); ++i) CHECK(a.witnesses[i].image.x == b.witnesses[i].image.x);
}

#include "spirallab/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spirallab/parallel.hpp"
#include "spirallab/semigroups.hpp"

namespace spirallab {

std::string_view to_string(NormKind kind) {
  switch (kind) {
    case NormKind::euclidean: return "euclidean";
    case NormKind::sup: return "sup";
    case NormKind::p_norm: return "p_norm";
  }
  return "unknown";
}

BallSpace::BallSpace(double r_, int m_, NormKind norm_, double p_) : r(r_), m(m_), norm(norm_), p(p_) {
  if (!(r >= 1.0)) throw Error(ErrorCode::domain, "ball exponent r must be >= 1");
  if (m < 1) throw Error(ErrorCode::domain, "fiber dimension m must be >= 1");
  if (norm == NormKind::p_norm && !(p >= 1.0)) throw Error(ErrorCode::domain, "p-norm needs p >= 1");
}

double BallSpace::y_norm(const CVec& y) const {
  switch (norm) {
    case NormKind::euclidean: return y.norm();
    case NormKind::sup: return y.size() == 0 ? 0.0 : y.cwiseAbs().maxCoeff();
    case NormKind::p_norm: {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < y.size(); ++i) acc += std::pow(std::abs(y[i]), p);
      return std::pow(acc, 1.0 / p);
    }
  }
  return y.norm();
}

double BallSpace::gauge(Complex x, const CVec& y) const {
  return std::norm(x) + std::pow(y_norm(y), r);
}

bool ball_contains(const BallSpace& space, const BallPoint& p) {
  return space.gauge(p.x, p.y) < 1.0;
}

HomogeneousPolynomial::HomogeneousPolynomial(int degree, int dims, std::vector<Term> terms)
    : degree_(degree), dims_(dims), terms_(std::move(terms)) {
  if (degree < 1) throw Error(ErrorCode::invalid_spec, "polynomial degree must be >= 1");
  if (dims < 1) throw Error(ErrorCode::invalid_spec, "polynomial needs at least one variable");
  for (const auto& t : terms_) {
    if (static_cast<int>(t.exponents.size()) != dims) {
      throw Error(ErrorCode::invalid_spec, "monomial exponent vector has wrong length");
    }
    int total = 0;
    for (int e : t.exponents) {
      if (e < 0) throw Error(ErrorCode::invalid_spec, "negative exponent");
      total += e;
    }
    if (total != degree) throw Error(ErrorCode::invalid_spec, "monomial is not of the stated degree");
  }
}

HomogeneousPolynomial HomogeneousPolynomial::first_power(Complex q, int degree, int dims) {
  std::vector<int> exps(static_cast<std::size_t>(dims), 0);
  exps[0] = degree;
  return {degree, dims, {{exps, q}}};
}

bool HomogeneousPolynomial::is_zero() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const Term& t) { return t.coefficient == 0.0; });
}

namespace {

Complex int_pow(Complex z, int e) {
  Complex acc = 1.0;
  for (int i = 0; i < e; ++i) acc *= z;
  return acc;
}

void require_dims(const HomogeneousPolynomial& q, const CVec& y) {
  if (y.size() != q.dims()) throw Error(ErrorCode::degree_mismatch, "vector length differs from Q's dimension");
}

}  // namespace

Complex HomogeneousPolynomial::operator()(const CVec& y) const {
  require_dims(*this, y);
  Complex sum = 0.0;
  for (const auto& t : terms_) {
    Complex mono = t.coefficient;
    for (int j = 0; j < dims_; ++j) mono *= int_pow(y[j], t.exponents[static_cast<std::size_t>(j)]);
    sum += mono;
  }
  return sum;
}

CVec HomogeneousPolynomial::gradient(const CVec& y) const {
  require_dims(*this, y);
  CVec grad = CVec::Zero(dims_);
  for (const auto& t : terms_) {
    for (int i = 0; i < dims_; ++i) {
      const int ei = t.exponents[static_cast<std::size_t>(i)];
      if (ei == 0) continue;
      Complex mono = t.coefficient * static_cast<double>(ei);
      for (int j = 0; j < dims_; ++j) {
        const int e = t.exponents[static_cast<std::size_t>(j)] - (j == i ? 1 : 0);
        mono *= int_pow(y[j], e);
      }
      grad[i] += mono;
    }
  }
  return grad;
}

HomogeneousPolynomial HomogeneousPolynomial::scaled(Complex factor) const {
  auto terms = terms_;
  for (auto& t : terms) t.coefficient *= factor;
  return {degree_, dims_, std::move(terms)};
}

SpiralMatrix::SpiralMatrix(Complex mu_, Complex lambda_, double r_) : mu(mu_), lambda(lambda_), r(r_) {
  if (!(mu.real() > 0.0)) throw Error(ErrorCode::domain, "SpiralMatrix needs Re mu > 0");
  if (!(lambda.real() > 0.0)) throw Error(ErrorCode::domain, "SpiralMatrix needs Re lambda > 0");
  if (!(r >= 1.0)) throw Error(ErrorCode::domain, "SpiralMatrix needs r >= 1");
}

namespace {

void require_degree(const HomogeneousPolynomial& q, const BallSpace& space) {
  if (!space.integer_order() || q.degree() != static_cast<int>(space.r)) {
    throw Error(ErrorCode::degree_mismatch, "deg Q must equal the ball exponent r");
  }
  if (q.dims() != space.m) throw Error(ErrorCode::degree_mismatch, "Q acts on C^m with a different m");
}

}  // namespace

BallPoint extend_H(const UnivalentMap& h, const BallSpace& space, const BallPoint& p) {
  const BranchedPower root(h, space.r);
  return {h.value(p.x), root(p.x) * p.y};
}

BallPoint muir_extend(const UnivalentMap& h, const BallSpace& space,
                      const HomogeneousPolynomial& q, const BallPoint& p) {
  require_degree(q, space);
  const BranchedPower root(h, space.r);
  return {h.value(p.x) + h.deriv(p.x) * q(p.y), root(p.x) * p.y};
}

BallPoint automorphism_phi(const HomogeneousPolynomial& q, const BallPoint& p) {
  return {p.x + q(p.y), p.y};
}

BallPoint automorphism_phi_inverse(const HomogeneousPolynomial& q, const BallPoint& p) {
  return {p.x - q(p.y), p.y};
}

BallPoint semigroup_action(const SpiralMatrix& a, double t, const BallPoint& p) {
  if (!(t >= 0.0)) throw Error(ErrorCode::domain, "semigroup time must be nonnegative");
  return {std::exp(-a.mu * t) * p.x, std::exp(-a.fiber_rate() * t) * p.y};
}

BallPoint conjugated_action(const HomogeneousPolynomial& q, double t, const BallPoint& p) {
  if (q.degree() != 2) {
    throw Error(ErrorCode::degree_mismatch, "conjugated_action is the quadratic-shear case");
  }
  if (!(t >= 0.0)) throw Error(ErrorCode::domain, "semigroup time must be nonnegative");
  const double e1 = std::exp(-t);
  const double e2 = std::exp(-2.0 * t);
  return {e1 * p.x + (e1 - e2) * q(p.y), e1 * p.y};
}

bool membership_H(const UnivalentMap& h, const BallSpace& space, const BallPoint& image,
                  Complex guess) {
  Complex x;
  try {
    x = h.invert(image.x, guess);
  } catch (const Error&) {
    return false;
  }
  if (!(std::abs(x) < 1.0)) return false;
  const double dh = std::abs(h.deriv_unchecked(x));
  if (!(dh > 0.0)) return false;
  // ||w / h'(x)^{1/r}|| = ||w|| / |h'(x)|^{1/r} for every branch.
  const double y_norm = space.y_norm(image.y) / std::pow(dh, 1.0 / space.r);
  return std::norm(x) + std::pow(y_norm, space.r) < 1.0;
}

double covering_radius_Rt(const UnivalentMap& h, Complex mu, Complex lambda, double r, double t,
                          Complex z0) {
  if (!(lambda.real() > 0.0)) {
    throw Error(ErrorCode::domain, "B = lambda id generates strict contractions iff Re lambda > 0");
  }
  if (!(t >= 0.0)) throw Error(ErrorCode::domain, "t must be nonnegative");
  const Complex x1 = h.invert(std::exp(-mu * t) * z0);
  const double contraction = std::pow(std::abs(std::exp(-lambda * t)), r);
  return (1.0 - contraction) / 4.0 * std::abs(h.deriv(x1)) * (1.0 - std::norm(x1));
}

SupNormEstimate sup_norm_Q(const HomogeneousPolynomial& q, const BallSpace& space, long samples,
                           int ascent_starts, int ascent_steps) {
  const int m = q.dims();
  const auto& primes = small_primes();
  if (2 * static_cast<std::size_t>(m) > primes.size()) {
    throw Error(ErrorCode::domain, "sup_norm_Q supports at most 12 fiber dimensions");
  }
  auto to_sphere = [&](CVec y) {
    const double n = space.y_norm(y);
    return CVec(y / n);
  };

  struct Candidate {
    double value;
    CVec y;
  };
  std::vector<Candidate> best;
  best.reserve(static_cast<std::size_t>(ascent_starts) + 1);
  for (long i = 1; i <= samples; ++i) {
    CVec y(m);
    for (int j = 0; j < m; ++j) {
      // Box-Muller on a pair of Halton coordinates gives one complex normal.
      const double u1 = radical_inverse(static_cast<std::uint64_t>(i), primes[2 * j]);
      const double u2 = radical_inverse(static_cast<std::uint64_t>(i), primes[2 * j + 1]);
      const double rad = std::sqrt(-2.0 * std::log(std::max(u1, 1e-300)));
      y[j] = std::polar(rad, 2.0 * kPi * u2);
    }
    if (space.y_norm(y) == 0.0) continue;
    y = to_sphere(y);
    const double v = std::abs(q(y));
    if (static_cast<int>(best.size()) < ascent_starts || v > best.back().value) {
      best.push_back({v, y});
      std::sort(best.begin(), best.end(),
                [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
      if (static_cast<int>(best.size()) > ascent_starts) best.pop_back();
    }
  }

  SupNormEstimate out;
  out.samples = samples;
  out.maximizer = CVec::Zero(m);
  if (best.empty()) return out;
  out.value = best.front().value;
  out.maximizer = best.front().y;

  for (auto& cand : best) {
    CVec y = cand.y;
    double v = cand.value;
    double eta = 0.1;
    for (int step = 0; step < ascent_steps && v > 0.0; ++step) {
      const Complex qy = q(y);
      // Ascent direction of |Q|^2 in real coordinates is conj(grad Q) Q.
      CVec dir = q.gradient(y).conjugate() * (qy / std::abs(qy));
      bool improved = false;
      while (eta > 1e-14) {
        const CVec trial = to_sphere(y + eta * dir);
        const double tv = std::abs(q(trial));
        if (tv > v) {
          y = trial;
          v = tv;
          improved = true;
          eta *= 2.0;
          break;
        }
        eta *= 0.5;
      }
      if (!improved) break;
    }
    if (v > out.value) {
      out.value = v;
      out.maximizer = y;
    }
  }
  return out;
}

BallPoint sample_ball_point(Rng& rng, const BallSpace& space, double margin) {
  // Gauge biased toward the boundary, split between the two coordinates.
  const double g = (1.0 - margin) * std::sqrt(rng.uniform());
  const double s = rng.uniform();
  const Complex x = std::polar(std::sqrt(g * s), 2.0 * kPi * rng.uniform());
  CVec dir(space.m);
  for (int j = 0; j < space.m; ++j) dir[j] = rng.complex_normal();
  const double n = space.y_norm(dir);
  const double y_norm = std::pow(g * (1.0 - s), 1.0 / space.r);
  return {x, n > 0.0 ? CVec(dir * (y_norm / n)) : CVec(CVec::Zero(space.m))};
}

InvarianceReport verify_invariance(const UnivalentMap& h, Complex mu, Complex lambda,
                                   const BallSpace& space, const HomogeneousPolynomial& q,
                                   const InvarianceOptions& options) {
  InvarianceReport report;
  report.muir_bound = 0.25 * lambda.real() / std::abs(lambda);

  if (!(lambda.real() > 0.0)) {
    report.precondition_ok = false;
    report.precondition_message = "Re lambda must be positive";
    return report;
  }
  if (!(mu.real() > 0.0)) {
    report.precondition_ok = false;
    report.precondition_message = "Re mu must be positive";
    return report;
  }
  try {
    require_degree(q, space);
  } catch (const Error& e) {
    report.precondition_ok = false;
    report.precondition_message = e.what();
    return report;
  }
  if (std::abs(h.value(0.0)) <= 1e-12) {
    report.spirallike_margin = spirallike_margin(h, mu);
    if (report.spirallike_margin < kMarginAcceptance) {
      report.precondition_ok = false;
      report.precondition_message = "h is not mu-spirallike on the sample grid";
      return report;
    }
  }
  report.q_sup_estimate = q.is_zero() ? 0.0 : sup_norm_Q(q, space).value;
  report.muir_bound_satisfied = report.q_sup_estimate <= report.muir_bound + 1e-12;

  const SpiralMatrix a(mu, lambda, space.r);
  const BranchedPower root(h, space.r);
  const double contraction_base = std::abs(std::exp(-lambda));

  struct SampleOutcome {
    long main_checks = 0, main_failures = 0;
    long muir_checks = 0, muir_failures = 0;
    long remark2_checks = 0, remark2_violations = 0;
    std::vector<InvarianceWitness> witnesses;
  };

  const std::size_t n = std::max(options.gamma_disk ? options.gamma_samples : 0,
                                  options.muir ? options.samples : 0);
  std::vector<BallPoint> starts;
  starts.reserve(n);
  Rng rng(options.seed);
  for (std::size_t i = 0; i < n; ++i) starts.push_back(sample_ball_point(rng, space, options.margin));

  std::vector<SampleOutcome> outcomes(n);
  parallel_for(n, [&](std::size_t i) {
    SampleOutcome& out = outcomes[i];
    const BallPoint& p = starts[i];
    const BallPoint image{h.value(p.x), root(p.x) * p.y};
    const double x0_factor = std::abs(h.deriv(p.x)) * (1.0 - std::norm(p.x));
    for (double t : options.times) {
      const BallPoint moved = semigroup_action(a, t, image);
      if (options.gamma_disk && i < options.gamma_samples) {
        const Complex x1 = h.invert(moved.x, p.x);
        const double contraction = std::pow(std::pow(contraction_base, t), space.r);
        const double rt = (1.0 - contraction) / 4.0 * std::abs(h.deriv(x1)) * (1.0 - std::norm(x1));
        const double lower = std::abs(std::exp(-mu * t)) * (1.0 - contraction) / 4.0 * x0_factor;
        ++out.remark2_checks;
        if (rt < lower - 1e-12 * std::max(1.0, lower)) ++out.remark2_violations;
        for (int k = 0; k < options.gamma_directions; ++k) {
          const Complex gamma =
              std::polar(options.gamma_fraction * rt, 2.0 * kPi * k / options.gamma_directions);
          const BallPoint target{moved.x + gamma, moved.y};
          ++out.main_checks;
          if (!membership_H(h, space, target, x1)) {
            ++out.main_failures;
            if (out.witnesses.size() < options.max_witnesses) {
              out.witnesses.push_back({"gamma-disk", p, t, gamma, target});
            }
          }
        }
      }
      if (options.muir && i < options.samples) {
        const BallPoint target =
            automorphism_phi_inverse(q, semigroup_action(a, t, automorphism_phi(q, image)));
        ++out.muir_checks;
        if (!membership_H(h, space, target, p.x)) {
          ++out.muir_failures;
          if (out.witnesses.size() < options.max_witnesses) {
            out.witnesses.push_back({"muir", p, t, target.x - moved.x, target});
          }
        }
      }
    }
  });

  for (auto& out : outcomes) {
    report.main_checks += out.main_checks;
    report.main_failures += out.main_failures;
    report.muir_checks += out.muir_checks;
    report.muir_failures += out.muir_failures;
    report.remark2_checks += out.remark2_checks;
    report.remark2_violations += out.remark2_violations;
    for (auto& w : out.witnesses) {
      if (report.witnesses.size() < options.max_witnesses) report.witnesses.push_back(std::move(w));
    }
  }
  report.pass = report.precondition_ok && report.main_failures == 0 && report.muir_failures == 0 &&
                report.remark2_violations == 0;
  return report;
}

}  // namespace spirallab

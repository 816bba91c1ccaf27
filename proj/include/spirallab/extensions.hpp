#pragma once

// The ball { |x|^2 + ||y||^r < 1 } in C x C^m, Roper-Suffridge and Muir
// extension operators, the linear semigroups acting on their images, and
// sampled verification of image invariance.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spirallab/random.hpp"
#include "spirallab/univalent.hpp"

namespace spirallab {

enum class NormKind { euclidean, sup, p_norm };

std::string_view to_string(NormKind kind);

struct BallSpace {
  double r = 2.0;
  int m = 1;
  NormKind norm = NormKind::euclidean;
  double p = 2.0;  ///< exponent for NormKind::p_norm

  BallSpace() = default;
  BallSpace(double r, int m, NormKind norm = NormKind::euclidean, double p = 2.0);

  double y_norm(const CVec& y) const;
  /// |x|^2 + ||y||^r (the Minkowski gauge is a monotone function of this).
  double gauge(Complex x, const CVec& y) const;
  bool integer_order() const { return r == std::floor(r); }
};

/// A point (x, y) of C x C^m; also used for image points (z, w).
struct BallPoint {
  Complex x;
  CVec y;
};

bool ball_contains(const BallSpace& space, const BallPoint& p);

/// Degree-r homogeneous polynomial on C^m given by monomial coefficients.
class HomogeneousPolynomial {
 public:
  struct Term {
    std::vector<int> exponents;
    Complex coefficient;
  };

  HomogeneousPolynomial(int degree, int dims, std::vector<Term> terms = {});

  static HomogeneousPolynomial zero(int degree, int dims) { return {degree, dims}; }
  /// q * y_1^degree.
  static HomogeneousPolynomial first_power(Complex q, int degree, int dims);

  int degree() const noexcept { return degree_; }
  int dims() const noexcept { return dims_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const;

  Complex operator()(const CVec& y) const;
  /// Holomorphic gradient (dQ/dy_1, ..., dQ/dy_m).
  CVec gradient(const CVec& y) const;
  HomogeneousPolynomial scaled(Complex factor) const;

 private:
  int degree_;
  int dims_;
  std::vector<Term> terms_;
};

/// diag(mu, (lambda + mu/r) id); generator of the linear semigroup F_t.
struct SpiralMatrix {
  Complex mu{1.0};
  Complex lambda{1.0};
  double r = 2.0;

  SpiralMatrix(Complex mu, Complex lambda, double r);
  Complex fiber_rate() const { return lambda + mu / r; }
};

/// (h(x), h'(x)^{1/r} y).
BallPoint extend_H(const UnivalentMap& h, const BallSpace& space, const BallPoint& p);
/// (h(x) + h'(x) Q(y), h'(x)^{1/r} y).
BallPoint muir_extend(const UnivalentMap& h, const BallSpace& space,
                      const HomogeneousPolynomial& q, const BallPoint& p);

/// (z, w) -> (z + Q(w), w).
BallPoint automorphism_phi(const HomogeneousPolynomial& q, const BallPoint& p);
BallPoint automorphism_phi_inverse(const HomogeneousPolynomial& q, const BallPoint& p);

/// (e^{-mu t} z, e^{-(lambda + mu/r) t} w).
BallPoint semigroup_action(const SpiralMatrix& a, double t, const BallPoint& p);

/// (e^{-t} z + (e^{-t} - e^{-2t}) Q(w), e^{-t} w): the starlike semigroup
/// conjugated by the quadratic shear. Requires deg Q = 2.
BallPoint conjugated_action(const HomogeneousPolynomial& q, double t, const BallPoint& p);

/// Whether (z, w) lies in H(B): x = h^{-1}(z) exists and
/// |x|^2 + ||w / h'(x)^{1/r}||^r < 1. Inversion failure counts as outside.
bool membership_H(const UnivalentMap& h, const BallSpace& space, const BallPoint& image,
                  Complex guess = 0.0);

/// R_t = (1 - |e^{-lambda t}|^r)/4 |h'(x1)| (1 - |x1|^2), x1 = h^{-1}(e^{-mu t} z0).
double covering_radius_Rt(const UnivalentMap& h, Complex mu, Complex lambda, double r, double t,
                          Complex z0);

struct SupNormEstimate {
  double value = 0.0;
  CVec maximizer;
  long samples = 0;
};

/// Estimate of sup_{||y|| = 1} |Q(y)|: quasi-random sphere samples (Halton
/// through Box-Muller) followed by projected gradient ascent from the best
/// starts. An estimate from below, not a certificate.
SupNormEstimate sup_norm_Q(const HomogeneousPolynomial& q, const BallSpace& space,
                           long samples = 100'000, int ascent_starts = 10, int ascent_steps = 50);

/// Interior sample with gauge at most 1 - margin.
BallPoint sample_ball_point(Rng& rng, const BallSpace& space, double margin);

struct InvarianceOptions {
  std::size_t samples = 10'000;        ///< interior points for the Muir check
  std::size_t gamma_samples = 1'000;   ///< interior points for the gamma-disk check
  std::vector<double> times{0.1, 0.5, 1.0, 2.0, 5.0};
  int gamma_directions = 16;
  double gamma_fraction = 0.999;
  double margin = 1e-3;
  std::uint64_t seed = 1;
  bool gamma_disk = true;
  bool muir = true;
  std::size_t max_witnesses = 20;
};

struct InvarianceWitness {
  std::string mode;  ///< "gamma-disk" or "muir"
  BallPoint start;
  double t = 0.0;
  Complex gamma;
  BallPoint image;
};

struct InvarianceReport {
  bool precondition_ok = true;
  std::string precondition_message;
  double spirallike_margin = 0.0;
  double q_sup_estimate = 0.0;
  double muir_bound = 0.0;  ///< (1/4) Re lambda / |lambda|
  bool muir_bound_satisfied = true;
  long main_checks = 0;
  long main_failures = 0;
  long muir_checks = 0;
  long muir_failures = 0;
  long remark2_checks = 0;
  long remark2_violations = 0;
  std::vector<InvarianceWitness> witnesses;
  bool pass = false;
};

/// (a) gamma-disk mode: (e^{-mu t} z0 + gamma, e^{-(lambda+mu/r) t} w0) in H(B)
///     for |gamma| = gamma_fraction * R_t in gamma_directions directions, plus
///     the lower bound on R_t in terms of x0;
/// (b) Muir mode: Phi^{-1}(F_t(Phi(H(p)))) in H(B).
/// A failed precondition (h not mu-spirallike, Re lambda <= 0) is reported,
/// not thrown.
InvarianceReport verify_invariance(const UnivalentMap& h, Complex mu, Complex lambda,
                                   const BallSpace& space, const HomogeneousPolynomial& q,
                                   const InvarianceOptions& options = {});

}  // namespace spirallab

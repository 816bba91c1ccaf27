#include "spirallab/generator_extension.hpp"

#include <cmath>

#include "spirallab/ode.hpp"

namespace spirallab {

ExtendedGenerator::ExtendedGenerator(Generator base, Complex lambda, BallSpace space,
                                     HomogeneousPolynomial q, double singularity_radius,
                                     long sup_samples)
    : base_(std::move(base)), lambda_(lambda), space_(space), q_(std::move(q)),
      eps_(singularity_radius) {
  if (!(lambda_.real() > 0.0)) throw Error(ErrorCode::domain, "extension needs Re lambda > 0");
  if (!space_.integer_order() || q_.degree() != static_cast<int>(space_.r)) {
    throw Error(ErrorCode::degree_mismatch, "deg Q must equal the ball exponent r");
  }
  if (q_.dims() != space_.m) throw Error(ErrorCode::degree_mismatch, "Q acts on C^m with a different m");
  q_sup_ = q_.is_zero() ? 0.0 : sup_norm_Q(q_, space_, sup_samples).value;
  if (q_sup_ > generator_bound() + 1e-12) {
    throw Error(ErrorCode::hypothesis_violated,
                "sup |Q| = " + std::to_string(q_sup_) + " exceeds r Re(lambda)/4 = " +
                    std::to_string(generator_bound()));
  }
}

double ExtendedGenerator::generator_bound() const { return space_.r * lambda_.real() / 4.0; }

double ExtendedGenerator::shear_bound() const { return 0.25 * lambda_.real() / std::abs(lambda_); }

double ExtendedGenerator::shear_sup() const { return q_sup_ / (space_.r * std::abs(lambda_)); }

BallPoint extend_generator(const ExtendedGenerator& g, const BallPoint& p) {
  const Generator& f = g.base();
  const double r = g.space().r;
  const Complex qy = g.q()(p.y);
  const Complex fp = f.df(p.x);
  // Q(0) = 0, so the quotient is only needed off the zero fiber.
  const Complex quotient = qy == 0.0 ? Complex{} : generator_quotient(f, p.x, g.singularity_radius());
  const Complex fiber = (fp + r * g.lambda() - quotient * qy) / r;
  return {f.f(p.x) + qy, fiber * p.y};
}

BallPoint h_tilde(const ExtendedGenerator& g, const UnivalentMap& h, const BallPoint& p) {
  const double r = g.space().r;
  const BranchedPower root(h, r);
  return {h.value(p.x) - h.deriv(p.x) * g.q()(p.y) / (r * g.lambda()), root(p.x) * p.y};
}

BallPoint linear_generator(const ExtendedGenerator& g, const BallPoint& zw) {
  const Complex mu = g.base().mu;
  return {mu * zw.x, (g.lambda() + mu / g.space().r) * zw.y};
}

CMat dh_tilde(const ExtendedGenerator& g, const UnivalentMap& h, const BallPoint& p) {
  const int m = g.space().m;
  const double r = g.space().r;
  const Complex rl = r * g.lambda();
  const Complex hp = h.deriv(p.x);
  const Complex hpp = h.second_deriv(p.x);
  const Complex root = BranchedPower(h, r)(p.x);
  const Complex qy = g.q()(p.y);
  const CVec grad = g.q().gradient(p.y);

  CMat d = CMat::Zero(m + 1, m + 1);
  d(0, 0) = hp - hpp * qy / rl;
  d.block(0, 1, 1, m) = (-hp / rl) * grad.transpose();
  // d/dx h'(x)^{1/r} = (1/r) h'^{1/r} h''/h'.
  d.block(1, 0, m, 1) = (root * hpp / (r * hp)) * p.y;
  d.block(1, 1, m, m) = root * CMat::Identity(m, m);
  return d;
}

CMat dh_tilde_inverse(const ExtendedGenerator& g, const UnivalentMap& h, const BallPoint& p) {
  const int m = g.space().m;
  const double r = g.space().r;
  const Complex rl = r * g.lambda();
  const Complex hp = h.deriv(p.x);
  if (hp == 0.0) throw Error(ErrorCode::derivative_vanishes, "h'(x) = 0");
  const Complex hpp = h.second_deriv(p.x);
  const Complex root = BranchedPower(h, r)(p.x);
  const CVec grad = g.q().gradient(p.y);

  CMat inv = CMat::Zero(m + 1, m + 1);
  inv(0, 0) = 1.0 / hp;
  inv.block(0, 1, 1, m) = grad.transpose() / (rl * root);
  inv.block(1, 0, m, 1) = (-hpp / (r * hp * hp)) * p.y;
  inv.block(1, 1, m, m) = CMat::Identity(m, m) / root -
                          (hpp / (r * rl * hp * root)) * (p.y * grad.transpose());
  return inv;
}

double dh_tilde_identity_residual(const ExtendedGenerator& g, const UnivalentMap& h,
                                  const BallPoint& p) {
  const CMat product = dh_tilde(g, h, p) * dh_tilde_inverse(g, h, p);
  return (product - CMat::Identity(product.rows(), product.cols())).cwiseAbs().maxCoeff();
}

namespace {

CVec stack(const BallPoint& p) {
  CVec v(p.y.size() + 1);
  v[0] = p.x;
  v.tail(p.y.size()) = p.y;
  return v;
}

BallPoint unstack(const CVec& v) { return {v[0], v.tail(v.size() - 1)}; }

}  // namespace

double conjugation_residual(const ExtendedGenerator& g, const UnivalentMap& h,
                            std::span<const BallPoint> samples) {
  double worst = 0.0;
  for (const auto& p : samples) {
    const CVec lhs = dh_tilde(g, h, p) * stack(extend_generator(g, p));
    const CVec rhs = stack(linear_generator(g, h_tilde(g, h, p)));
    worst = std::max(worst, (lhs - rhs).norm());
  }
  return worst;
}

BallTrajectory flow_ball(const ExtendedGenerator& g, const BallPoint& p, double T, double tol,
                         bool record) {
  if (!(T >= 0.0)) throw Error(ErrorCode::domain, "flow time must be nonnegative");
  if (!ball_contains(g.space(), p)) throw Error(ErrorCode::domain, "flow_ball start is outside the ball");
  BallTrajectory traj;
  const auto rhs = [&g](const CVec& v) {
    const BallPoint d = extend_generator(g, unstack(v));
    return CVec(-stack(d));
  };
  const auto inside = [&g](const CVec& v) {
    return g.space().gauge(v[0], v.tail(v.size() - 1)) < 1.0;
  };
  const auto observe = [&](double t, const CVec& v) {
    traj.max_gauge = std::max(traj.max_gauge, g.space().gauge(v[0], v.tail(v.size() - 1)));
    if (record) {
      traj.times.push_back(t);
      traj.points.push_back(unstack(v));
    }
  };
  const DormandPrince solver(OdeOptions{tol, 1'000'000, 1e-3});
  const auto result = solver.integrate(rhs, stack(p), T, inside, observe);
  traj.endpoint = unstack(result.state);
  traj.steps = result.steps;
  if (result.stopped) {
    traj.exited = true;
    traj.exit_time = result.time;
  }
  return traj;
}

double ball_semigroup_residual(const ExtendedGenerator& g, const BallPoint& p, double t, double s,
                               double tol) {
  const auto whole = flow_ball(g, p, t + s, tol);
  const auto first = flow_ball(g, p, s, tol);
  const auto second = flow_ball(g, first.endpoint, t, tol);
  return (stack(whole.endpoint) - stack(second.endpoint)).norm();
}

}  // namespace spirallab

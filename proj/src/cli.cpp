#include "spirallab/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "spirallab/covering.hpp"
#include "spirallab/extensions.hpp"
#include "spirallab/generator_extension.hpp"
#include "spirallab/parallel.hpp"
#include "spirallab/semigroups.hpp"
#include "spirallab/sharp_bound.hpp"

namespace spirallab {

namespace {

struct Outcome {
  Json body = Json::object();
  bool pass = false;
  bool inconclusive = false;
  Json witnesses = Json::array();
  std::vector<std::pair<std::string, std::string>> files;  ///< (path, contents)
};

std::string csv_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

template <typename... Values>
void csv_row(std::ostringstream& os, const Values&... values) {
  bool first = true;
  ((os << (first ? "" : ",") << csv_number(static_cast<double>(values)), first = false), ...);
  os << '\n';
}

BallSpace make_space(const RunConfig& c) {
  NormKind kind = NormKind::euclidean;
  if (c.norm == "sup") {
    kind = NormKind::sup;
  } else if (c.norm == "p") {
    kind = NormKind::p_norm;
  } else if (c.norm != "euclidean") {
    throw Error(ErrorCode::invalid_spec, "norm must be euclidean, sup or p");
  }
  return BallSpace(c.r, c.m, kind, c.p_norm);
}

HomogeneousPolynomial make_q(const RunConfig& c, const BallSpace& space) {
  const int degree = static_cast<int>(space.r);
  if (c.q.empty()) return HomogeneousPolynomial::zero(std::max(degree, 1), space.m);
  auto q = polynomial_from_json(load_spec_argument(c.q), space.m);
  if (q.is_zero() && q.terms().empty() && q.degree() != degree) {
    return HomogeneousPolynomial::zero(std::max(degree, 1), space.m);
  }
  return q;
}

Json complex_list_json(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(x);
  return out;
}

// ---- covering ----

Outcome run_covering(const RunConfig& c) {
  if (c.fn.empty()) throw Error(ErrorCode::invalid_spec, "covering needs --fn");
  const UnivalentMap h = function_from_json(load_spec_argument(c.fn));
  const PolarGrid grid{c.grid_radial, c.grid_angular};
  if (grid.radial < 2 || grid.angular < 4) throw Error(ErrorCode::domain, "grid too small");

  Outcome o;
  o.body["inputs"] = {{"fn", function_to_json(h)},
                      {"x0", to_json(c.x0)},
                      {"alpha", c.alpha},
                      {"beta", c.beta ? to_json(*c.beta) : Json(nullptr)},
                      {"grid", Json::array({grid.radial, grid.angular})}};
  const CoveringReport rep = c.beta ? verify_theorem2(h, c.x0, c.alpha, *c.beta, grid)
                                    : verify_theorem1(h, c.x0, c.alpha, grid);
  Json& res = o.body["result"];
  res["predicted"] = rep.predicted_radius;
  res["measured"] = rep.measured_radius_lower;
  res["tolerance"] = rep.tolerance;
  res["margin"] = rep.measured_radius_lower - (rep.predicted_radius - rep.tolerance);
  res["center"] = to_json(rep.center);
  res["complement_empty"] = rep.complement_empty;
  res["nearest_complement"] = to_json(rep.min_witness);
  if (rep.x1) res["x1"] = to_json(*rep.x1);
  if (rep.secondary_bound) res["secondary_bound"] = *rep.secondary_bound;
  o.pass = rep.pass;
  if (!rep.pass) o.witnesses.push_back({{"kind", "uncovered"}, {"point", to_json(rep.min_witness)}});

  if (!c.dump_region.empty()) {
    const auto spec = OmegaSpec::make(h, c.x0, c.alpha);
    std::ostringstream os;
    os << "x_re,x_im,in_omega\n";
    for (const auto& s : sample_region(h, spec, grid)) csv_row(os, s.x.real(), s.x.imag(), s.in_omega ? 1 : 0);
    o.files.emplace_back(c.dump_region, os.str());
  }
  return o;
}

// ---- koenigs ----

Outcome run_koenigs(const RunConfig& c) {
  if (c.gen.empty()) throw Error(ErrorCode::invalid_spec, "koenigs needs --gen");
  const Generator gen = generator_from_json(load_spec_argument(c.gen));
  if (c.koenigs_grid < 1) throw Error(ErrorCode::domain, "--grid must be positive");
  validate_generator(gen);
  const UnivalentMap h = koenigs(gen);

  Outcome o;
  o.body["inputs"] = {{"gen", generator_to_json(gen)}, {"grid", c.koenigs_grid}};
  const int n = c.koenigs_grid;
  std::ostringstream os;
  os << "x_re,x_im,h_re,h_im,residual\n";
  double worst = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double rho = 0.95 * k / n;
    const int arms = k == 0 ? 1 : 4 * n;
    for (int j = 0; j < arms; ++j) {
      const Complex z = std::polar(rho, 2.0 * kPi * j / arms);
      const Complex w = h.value(z);
      const Complex pt[1] = {z};
      const double res = koenigs_residual(h, gen, pt);
      const double scaled = res / (1.0 + std::abs(w));
      if (scaled > worst) {
        worst = scaled;
        if (scaled > 1e-8) o.witnesses.push_back({{"kind", "residual"}, {"point", to_json(z)}, {"residual", res}});
      }
      csv_row(os, z.real(), z.imag(), w.real(), w.imag(), res);
    }
  }
  o.body["result"] = {{"max_scaled_residual", worst}, {"h0", to_json(h.value(0.0))}};
  if (gen.kind == GeneratorKind::hyperbolic) {
    const double ang = angular_derivative_estimate(gen);
    o.body["result"]["angular_derivative_estimate"] = ang;
    o.body["result"]["mu_matches_angular_derivative"] = std::abs(gen.mu - ang) <= 0.05 * ang;
  }
  o.pass = worst <= 1e-8;
  if (!c.out.empty()) o.files.emplace_back(c.out, os.str());
  return o;
}

// ---- flow ----

Outcome run_flow(const RunConfig& c) {
  if (c.gen.empty()) throw Error(ErrorCode::invalid_spec, "flow needs --gen");
  const Generator gen = generator_from_json(load_spec_argument(c.gen));
  require_in_disk(c.z0, "flow start");
  if (!(c.t >= 0.0)) throw Error(ErrorCode::nonpositive_t, "--t must be nonnegative");

  Outcome o;
  o.body["inputs"] = {{"gen", generator_to_json(gen)}, {"z0", to_json(c.z0)}, {"t", c.t}, {"tol", c.tol}};
  try {
    const FlowResult fr = flow(gen, c.z0, c.t, c.tol);
    o.body["result"] = {{"endpoint", to_json(fr.endpoint)},
                        {"modulus", std::abs(fr.endpoint)},
                        {"steps", fr.steps},
                        {"local_error_estimate", fr.local_error_estimate}};
    o.pass = true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::left_disk && e.code() != ErrorCode::step_underflow) throw;
    o.body["result"] = {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
    o.witnesses.push_back({{"kind", std::string(to_string(e.code()))}, {"z0", to_json(c.z0)}, {"t", c.t}});
  }
  return o;
}

// ---- spiral-check ----

Outcome run_spiral_check(const RunConfig& c) {
  if (c.fn.empty()) throw Error(ErrorCode::invalid_spec, "spiral-check needs --fn");
  const UnivalentMap h = function_from_json(load_spec_argument(c.fn));
  if (!(c.mu.real() > 0.0)) throw Error(ErrorCode::domain, "Re mu must be positive");
  const PolarGrid grid{c.grid_radial, c.grid_angular};

  Outcome o;
  o.body["inputs"] = {{"fn", function_to_json(h)}, {"mu", to_json(c.mu)},
                      {"grid", Json::array({grid.radial, grid.angular})}};
  const MarginScan scan = spirallike_scan(h, c.mu, grid);
  o.body["result"] = {{"margin", scan.margin}, {"argmin", to_json(scan.witness)},
                      {"acceptance", kMarginAcceptance}};
  o.pass = scan.margin >= kMarginAcceptance;
  if (!o.pass) o.witnesses.push_back({{"kind", "negative_margin"}, {"point", to_json(scan.witness)}});
  return o;
}

// ---- extend ----

Json witness_json(const InvarianceWitness& w) {
  return {{"mode", w.mode}, {"start", to_json(w.start)}, {"t", w.t}, {"gamma", to_json(w.gamma)},
          {"image", to_json(w.image)}};
}

Outcome run_extend(const RunConfig& c) {
  if (c.fn.empty()) throw Error(ErrorCode::invalid_spec, "extend needs --fn");
  const UnivalentMap h = function_from_json(load_spec_argument(c.fn));
  const BallSpace space = make_space(c);
  const HomogeneousPolynomial q = make_q(c, space);
  if (c.samples < 0 || c.gamma_samples < 0) throw Error(ErrorCode::domain, "sample counts must be nonnegative");

  InvarianceOptions opt;
  opt.samples = static_cast<std::size_t>(c.samples);
  opt.gamma_samples = static_cast<std::size_t>(c.gamma_samples);
  opt.times = c.times;
  opt.seed = c.seed;

  Outcome o;
  o.body["inputs"] = {{"fn", function_to_json(h)},      {"r", c.r},
                      {"m", c.m},                       {"norm", c.norm},
                      {"Q", polynomial_to_json(q)},     {"mu", to_json(c.mu)},
                      {"lambda", to_json(c.lambda)},    {"samples", c.samples},
                      {"gamma_samples", c.gamma_samples}, {"times", complex_list_json(c.times)},
                      {"seed", c.seed}};
  const InvarianceReport rep = verify_invariance(h, c.mu, c.lambda, space, q, opt);
  o.body["result"] = {{"precondition_ok", rep.precondition_ok},
                      {"precondition_message", rep.precondition_message},
                      {"spirallike_margin", rep.spirallike_margin},
                      {"q_sup_estimate", rep.q_sup_estimate},
                      {"muir_bound", rep.muir_bound},
                      {"muir_bound_satisfied", rep.muir_bound_satisfied},
                      {"main_checks", rep.main_checks},
                      {"main_failures", rep.main_failures},
                      {"muir_checks", rep.muir_checks},
                      {"muir_failures", rep.muir_failures},
                      {"remark2_checks", rep.remark2_checks},
                      {"remark2_violations", rep.remark2_violations}};
  for (const auto& w : rep.witnesses) o.witnesses.push_back(witness_json(w));
  o.pass = rep.pass && rep.muir_bound_satisfied;
  // Outside the hypotheses a clean sample is no evidence either way.
  o.inconclusive = !o.pass && o.witnesses.empty();
  return o;
}

// ---- sharp-bound ----

Outcome run_sharp_bound(const RunConfig& c) {
  if (c.r < 1 || c.r != std::floor(c.r)) throw Error(ErrorCode::domain, "--r must be a positive integer");
  const SharpParams p(c.lambda, static_cast<int>(c.r));
  const double t_max = c.tmax.value_or(50.0 / (p.a() * p.r));
  if (!(t_max > 0.0)) throw Error(ErrorCode::nonpositive_t, "--tmax must be positive");
  if (c.curve_points < 2) throw Error(ErrorCode::domain, "--points must be at least 2");

  Outcome o;
  o.body["inputs"] = {{"lambda", to_json(c.lambda)}, {"r", p.r}, {"tmax", t_max}, {"points", c.curve_points}};
  const InfimumResult inf = infimum_f(p, t_max, static_cast<std::size_t>(c.curve_points));
  const auto grid = log_grid(1e-4, t_max, static_cast<std::size_t>(c.curve_points));
  const CorReport cor = verify_cor_inequality(p, grid);
  const double f_end = f_sharp(p, t_max);

  o.body["result"] = {{"infimum", inf.infimum},
                      {"limit", inf.limit},
                      {"grid_minimum", inf.grid_minimum},
                      {"argmin", inf.argmin},
                      {"cor_min_margin", cor.min_margin},
                      {"cor_argmin", cor.argmin},
                      {"cor_strictly_positive", cor.strictly_positive},
                      {"cor_identically_zero", cor.identically_zero},
                      {"f_tmax", f_end}};
  const bool inf_ok = std::abs(inf.infimum - inf.limit) <= 1e-3;
  const bool cor_ok = p.b() == 0.0 ? cor.identically_zero : cor.strictly_positive;
  const bool end_ok = std::abs(f_end - 1.0) <= 1e-6;
  o.pass = inf_ok && cor_ok && end_ok;
  if (!inf_ok) o.witnesses.push_back({{"kind", "below_limit"}, {"t", inf.argmin}, {"f", inf.grid_minimum}});
  if (!cor_ok) o.witnesses.push_back({{"kind", "cor_margin"}, {"t", cor.argmin}, {"margin", cor.min_margin}});
  if (!end_ok) o.witnesses.push_back({{"kind", "f_tmax"}, {"t", t_max}, {"f", f_end}});

  if (!c.dump_curve.empty()) {
    std::ostringstream os;
    os << "t,f,cor_margin\n";
    for (double t : grid) csv_row(os, t, f_sharp(p, t), cor_margin(p, t));
    o.files.emplace_back(c.dump_curve, os.str());
  }
  return o;
}

// ---- gen-extend ----

Outcome run_gen_extend(const RunConfig& c) {
  if (c.gen.empty()) throw Error(ErrorCode::invalid_spec, "gen-extend needs --gen");
  const Generator base = generator_from_json(load_spec_argument(c.gen));
  const BallSpace space = make_space(c);
  if (!space.integer_order()) throw Error(ErrorCode::domain, "gen-extend needs integer r");
  const HomogeneousPolynomial q = make_q(c, space);
  if (!(c.T >= 0.0)) throw Error(ErrorCode::nonpositive_t, "--T must be nonnegative");
  if (c.samples < 0 || c.residual_samples < 0) throw Error(ErrorCode::domain, "sample counts must be nonnegative");
  validate_generator(base);

  const ExtendedGenerator g(base, c.lambda, space, q);
  const UnivalentMap h = koenigs(base);

  Outcome o;
  o.body["inputs"] = {{"gen", generator_to_json(base)}, {"lambda", to_json(c.lambda)},
                      {"r", c.r},                       {"m", c.m},
                      {"norm", c.norm},                 {"Q", polynomial_to_json(q)},
                      {"samples", c.samples},           {"residual_samples", c.residual_samples},
                      {"T", c.T},                       {"tol", c.tol},
                      {"seed", c.seed}};

  Rng rng(c.seed);
  std::vector<BallPoint> residual_points;
  for (long i = 0; i < c.residual_samples; ++i) residual_points.push_back(sample_ball_point(rng, space, 1e-3));
  std::vector<BallPoint> starts;
  for (long i = 0; i < c.samples; ++i) starts.push_back(sample_ball_point(rng, space, 1e-3));

  std::vector<double> conj(residual_points.size()), ident(residual_points.size());
  parallel_for(residual_points.size(), [&](std::size_t i) {
    const BallPoint pt[1] = {residual_points[i]};
    conj[i] = conjugation_residual(g, h, pt);
    ident[i] = dh_tilde_identity_residual(g, h, residual_points[i]);
  });
  double conj_max = 0.0, ident_max = 0.0;
  std::size_t conj_arg = 0, ident_arg = 0;
  for (std::size_t i = 0; i < conj.size(); ++i) {
    if (conj[i] > conj_max) conj_max = conj[i], conj_arg = i;
    if (ident[i] > ident_max) ident_max = ident[i], ident_arg = i;
  }

  std::vector<BallTrajectory> trajs(starts.size());
  const bool record = !c.dump_traj.empty();
  parallel_for(starts.size(), [&](std::size_t i) { trajs[i] = flow_ball(g, starts[i], c.T, c.tol, record); });
  long exits = 0;
  double max_gauge = 0.0;
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    max_gauge = std::max(max_gauge, trajs[i].max_gauge);
    if (trajs[i].exited) {
      ++exits;
      o.witnesses.push_back({{"kind", "left_ball"}, {"start", to_json(starts[i])}, {"exit_time", trajs[i].exit_time}});
    }
  }

  o.body["result"] = {{"q_sup_estimate", g.q_sup()},
                      {"generator_bound", g.generator_bound()},
                      {"shear_sup", g.shear_sup()},
                      {"shear_bound", g.shear_bound()},
                      {"near_shear_bound", g.near_shear_bound()},
                      {"conjugation_residual", conj_max},
                      {"identity_residual", ident_max},
                      {"exits", exits},
                      {"max_gauge", max_gauge}};
  const bool conj_ok = conj_max <= 1e-8;
  const bool ident_ok = ident_max <= 1e-9;
  if (!conj_ok) {
    o.witnesses.push_back({{"kind", "conjugation"}, {"point", to_json(residual_points[conj_arg])}, {"residual", conj_max}});
  }
  if (!ident_ok) {
    o.witnesses.push_back({{"kind", "inverse"}, {"point", to_json(residual_points[ident_arg])}, {"residual", ident_max}});
  }
  o.pass = conj_ok && ident_ok && exits == 0;

  if (record) {
    std::ostringstream os;
    os << "start,t,x_re,x_im,y_norm,gauge\n";
    for (std::size_t i = 0; i < trajs.size(); ++i) {
      for (std::size_t k = 0; k < trajs[i].times.size(); ++k) {
        const BallPoint& pt = trajs[i].points[k];
        csv_row(os, i, trajs[i].times[k], pt.x.real(), pt.x.imag(), space.y_norm(pt.y), space.gauge(pt.x, pt.y));
      }
    }
    o.files.emplace_back(c.dump_traj, os.str());
  }
  return o;
}

Outcome dispatch(const RunConfig& c) {
  if (c.subcommand == "covering") return run_covering(c);
  if (c.subcommand == "koenigs") return run_koenigs(c);
  if (c.subcommand == "flow") return run_flow(c);
  if (c.subcommand == "spiral-check") return run_spiral_check(c);
  if (c.subcommand == "extend") return run_extend(c);
  if (c.subcommand == "sharp-bound") return run_sharp_bound(c);
  if (c.subcommand == "gen-extend") return run_gen_extend(c);
  throw Error(ErrorCode::invalid_spec, "unknown subcommand \"" + c.subcommand + "\"");
}

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_spec:
    case ErrorCode::point_outside_disk:
    case ErrorCode::domain:
    case ErrorCode::degree_mismatch:
    case ErrorCode::nonpositive_t:
    case ErrorCode::hypothesis_violated:
      return true;
    default:
      return false;
  }
}

Json assemble(const RunConfig& c, Outcome& o, double seconds) {
  Json report;
  report["schema"] = kSchema;
  report["subcommand"] = c.subcommand;
  report["tool_version"] = kToolVersion;
  for (auto& [key, value] : o.body.items()) report[key] = value;
  report["pass"] = o.pass;
  report["inconclusive"] = !o.pass && (o.inconclusive || o.witnesses.empty());
  report["witnesses"] = o.witnesses;
  report["determinism_hash"] = determinism_hash(report);
  report["timing"] = {{"wall_seconds", seconds}};
  return report;
}

Outcome failed_outcome(const Error& e) {
  Outcome o;
  o.body["result"] = {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
  o.inconclusive = true;
  return o;
}

}  // namespace

std::string determinism_hash(const Json& report) {
  Json copy = report;
  copy.erase("timing");
  copy.erase("determinism_hash");
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char ch : copy.dump()) {
    hash ^= ch;
    hash *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

void write_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::invalid_spec, "cannot write " + tmp);
    f << contents;
    if (!f.flush()) throw Error(ErrorCode::invalid_spec, "write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

Json build_report(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o = dispatch(config);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return assemble(config, o, seconds);
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = dispatch(config);
  } catch (const Error& e) {
    if (is_input_error(e.code())) {
      err << "spirallab: " << e.what() << '\n';
      return 2;
    }
    o = failed_outcome(e);
  } catch (const Json::exception& e) {
    err << "spirallab: invalid-spec: " << e.what() << '\n';
    return 2;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const Json report = assemble(config, o, seconds);
  const std::string text = report.dump(2) + "\n";
  try {
    for (const auto& [path, contents] : o.files) write_atomic(path, contents);
    // koenigs sends its samples to --out; its JSON goes to --report.
    const std::string& json_path = config.subcommand == "koenigs" ? config.report : config.out;
    if (json_path.empty()) {
      out << text;
    } else {
      write_atomic(json_path, text);
    }
  } catch (const std::exception& e) {
    err << "spirallab: " << e.what() << '\n';
    return 2;
  }
  return o.pass ? 0 : 1;
}

}  // namespace spirallab

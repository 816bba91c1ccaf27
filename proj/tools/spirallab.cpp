// spirallab: command-line front end.

#include <iostream>

#include "CLI11.hpp"
#include "spirallab/cli.hpp"

namespace {

const char* kFooter = R"(Complex arguments are "re,im" (or a bare real). Spec arguments accept a
JSON file path, inline JSON, or a family name such as koebe or logistic.

Reports are JSON with "schema":"spirallab/1"; complex values are [re,im].
Exit status: 0 pass, 1 failure or inconclusive, 2 usage or input error.

CSV outputs:
  covering --dump-region   x_re,x_im,in_omega       (polar grid, in_omega 0/1)
  koenigs --out            x_re,x_im,h_re,h_im,residual
  sharp-bound --dump-curve t,f,cor_margin             (log-spaced t)
  gen-extend --dump-traj   start,t,x_re,x_im,y_norm,gauge

SPIRALLAB_THREADS sets the worker count.)";

struct Raw {
  std::string x0 = "0", beta, mu = "1", lambda = "1", z0 = "0", grid, times;
};

}  // namespace

int main(int argc, char** argv) {
  spirallab::RunConfig cfg;
  Raw raw;

  CLI::App app{"spirallab: numerical checks for univalent maps, covering radii, semigroups and ball extensions"};
  app.footer(kFooter);
  app.require_subcommand(1);
  app.set_version_flag("--version", spirallab::kToolVersion);

  auto add_out = [&](CLI::App* s) {
    s->add_option("--out", cfg.out, "report path (stdout when omitted)");
  };
  auto add_ball = [&](CLI::App* s) {
    s->add_option("--r", cfg.r, "order r of the ball |x|^2 + |y|^r < 1");
    s->add_option("--m", cfg.m, "dimension of y");
    s->add_option("--norm", cfg.norm, "y norm: euclidean, sup or p")->check(CLI::IsMember({"euclidean", "sup", "p"}));
    s->add_option("--p", cfg.p_norm, "exponent for --norm p");
    s->add_option("--Q", cfg.q, "homogeneous polynomial spec (default 0)");
    s->add_option("--lambda", raw.lambda, "lambda as re,im");
    s->add_option("--seed", cfg.seed, "RNG seed");
  };

  auto* cov = app.add_subcommand("covering", "measure the covered disk around h(x0) or beta h(x0)");
  cov->add_option("--fn", cfg.fn, "function spec")->required();
  cov->add_option("--x0", raw.x0, "base point");
  cov->add_option("--alpha", cfg.alpha, "alpha in (0,1)");
  cov->add_option("--beta", raw.beta, "spiral factor; switches to the beta-scaled covering check");
  cov->add_option("--grid", raw.grid, "NR,NT polar grid (default 400,400)");
  cov->add_option("--dump-region", cfg.dump_region, "CSV of grid points and membership");
  add_out(cov);

  auto* koe = app.add_subcommand("koenigs", "sample the Koenigs map of a generator");
  koe->add_option("--gen", cfg.gen, "generator spec")->required();
  koe->add_option("--grid", cfg.koenigs_grid, "radial rings (default 32)");
  koe->add_option("--out", cfg.out, "CSV samples");
  koe->add_option("--report", cfg.report, "JSON summary (stdout when omitted)");

  auto* flw = app.add_subcommand("flow", "integrate dz/dt = -f(z)");
  flw->add_option("--gen", cfg.gen, "generator spec")->required();
  flw->add_option("--z0", raw.z0, "start point");
  flw->add_option("--t", cfg.t, "flow time");
  flw->add_option("--tol", cfg.tol, "absolute tolerance");
  add_out(flw);

  auto* spc = app.add_subcommand("spiral-check", "grid margin of Re(mu h/(z h'))");
  spc->add_option("--fn", cfg.fn, "function spec")->required();
  spc->add_option("--mu", raw.mu, "spiral exponent");
  spc->add_option("--grid", raw.grid, "NR,NT polar grid (default 200,256)");
  add_out(spc);

  auto* ext = app.add_subcommand("extend", "invariance of the extended map image under the spiral semigroup");
  ext->add_option("--fn", cfg.fn, "function spec")->required();
  ext->add_option("--mu", raw.mu, "spiral exponent");
  ext->add_option("--samples", cfg.samples, "interior samples for the shear check");
  ext->add_option("--gamma-samples", cfg.gamma_samples, "interior samples for the gamma-disk check");
  ext->add_option("--times", raw.times, "comma-separated times");
  add_ball(ext);
  add_out(ext);

  auto* shb = app.add_subcommand("sharp-bound", "infimum of the sharp perturbation bound f(t)");
  shb->add_option("--lambda", raw.lambda, "lambda as re,im");
  shb->add_option("--r", cfg.r, "integer r");
  double tmax = 0.0;
  auto* tmax_opt = shb->add_option("--tmax", tmax, "upper end of the t grid (default 50/(r Re lambda))");
  shb->add_option("--points", cfg.curve_points, "grid points");
  shb->add_option("--dump-curve", cfg.dump_curve, "CSV of f(t)");
  add_out(shb);

  auto* gex = app.add_subcommand("gen-extend", "extended generator on the ball: conjugation and flow checks");
  gex->add_option("--gen", cfg.gen, "generator spec")->required();
  long flow_starts = 100;
  gex->add_option("--samples", flow_starts, "flow starts (default 100)");
  gex->add_option("--residual-samples", cfg.residual_samples, "points for the conjugation check");
  gex->add_option("--T", cfg.T, "flow horizon");
  gex->add_option("--tol", cfg.tol, "integrator tolerance");
  gex->add_option("--dump-traj", cfg.dump_traj, "CSV of trajectories");
  add_ball(gex);
  add_out(gex);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.subcommand = app.get_subcommands().front()->get_name();
    cfg.x0 = spirallab::parse_complex(raw.x0);
    cfg.z0 = spirallab::parse_complex(raw.z0);
    cfg.mu = spirallab::parse_complex(raw.mu);
    cfg.lambda = spirallab::parse_complex(raw.lambda);
    if (!raw.beta.empty()) cfg.beta = spirallab::parse_complex(raw.beta);
    if (!raw.times.empty()) cfg.times = spirallab::parse_list(raw.times);
    if (*tmax_opt) cfg.tmax = tmax;
    if (cfg.subcommand == "gen-extend") cfg.samples = flow_starts;
    if (!raw.grid.empty()) {
      const auto g = spirallab::parse_list(raw.grid);
      if (g.size() != 2) throw spirallab::Error(spirallab::ErrorCode::invalid_spec, "--grid needs NR,NT");
      cfg.grid_radial = static_cast<int>(g[0]);
      cfg.grid_angular = static_cast<int>(g[1]);
    } else if (cfg.subcommand == "spiral-check") {
      cfg.grid_radial = 200;
      cfg.grid_angular = 256;
    }
  } catch (const spirallab::Error& e) {
    std::cerr << "spirallab: " << e.what() << '\n';
    return 2;
  }
  return spirallab::run(cfg, std::cout, std::cerr);
}

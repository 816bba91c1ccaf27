#pragma once

// Subcommand driver shared by the spirallab executable and the tests.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spirallab/io.hpp"

namespace spirallab {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSchema = "spirallab/1";

struct RunConfig {
  std::string subcommand;
  std::string fn;    ///< function spec: path, inline JSON or family name
  std::string gen;   ///< generator spec
  std::string q;     ///< polynomial spec; empty means Q = 0

  Complex x0{};
  double alpha = 0.5;
  std::optional<Complex> beta;
  Complex mu{1.0};
  Complex lambda{1.0};
  Complex z0{};
  double t = 1.0;
  double T = 5.0;
  double tol = 1e-10;
  std::optional<double> tmax;
  double r = 2.0;
  int m = 1;
  std::string norm = "euclidean";
  double p_norm = 2.0;
  std::vector<double> times{0.1, 0.5, 1.0, 2.0, 5.0};

  int grid_radial = 400;
  int grid_angular = 400;
  int koenigs_grid = 32;
  long samples = 10'000;
  long gamma_samples = 1'000;
  long residual_samples = 500;
  long curve_points = 10'000;
  std::uint64_t seed = 1;

  std::string out;          ///< report (CSV samples for koenigs); stdout when empty
  std::string report;       ///< koenigs: optional JSON summary
  std::string dump_region;
  std::string dump_curve;
  std::string dump_traj;
};

/// Exit status: 0 pass, 1 verified failure or inconclusive, 2 usage or input error.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Builds the report for a subcommand without writing it; the hash and timing
/// fields are filled in.
Json build_report(const RunConfig& config);

/// FNV-1a over the compact dump of the report with the "timing" and
/// "determinism_hash" members removed.
std::string determinism_hash(const Json& report);

/// Writes to path.tmp then renames over path.
void write_atomic(const std::string& path, const std::string& contents);

}  // namespace spirallab

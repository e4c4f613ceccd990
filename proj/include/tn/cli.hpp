#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tn/sampling.hpp"

namespace tn {

inline constexpr int kExitOk = 0;
inline constexpr int kExitResidual = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDomain = 3;

struct RunConfig {
  std::string command;  // curvature | geodesic | lagrangian | source | linespace | verify-all
  std::string manifold = "sphere2";  // builtin name or path to a manifold JSON file
  std::string u;                     // potential for `lagrangian`
  std::string H;                     // custom intensity for `source`
  int n = 2;
  int samples = 64;
  std::uint64_t seed = kDefaultSeed;
  std::map<std::string, double> tolerances;
  std::string out;
  std::string format = "json";

  // geodesic
  double T = 1.0;
  int steps = 1000;
  std::string paths;  // prefix for per-trajectory CSV files

  // source
  std::string kind = "minimal";
  double c0 = 1.0, c1 = 1.0, c2 = 5.0;
  double r_lo = 0.5, r_hi = 3.0;

  // linespace
  std::string p;
  std::string V;
};

struct RunResult {
  int exit_code = kExitOk;
  std::string report;  // JSON or CSV document
  std::string error;   // message for exit codes 2 and 3
};

/// Executes one command. Configuration problems yield kExitConfig and
/// geometric failures kExitDomain; the report then carries the error.
RunResult run(const RunConfig& config);

/// Full command-line entry point: parses argv, runs, writes the report to --out or `out`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tn

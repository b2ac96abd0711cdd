#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ogt/harness.hpp"

namespace ogt::cli {

/// Exit codes of the `ogt` tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Input of the `sweep` subcommand:
///
///   { "algorithm": "ogt", "sizes": [20, 40, 80], "kappa": 50,
///     "target_gap": 1e-8, "d": 4, "seed": 1, "budget_factor": 100,
///     "mode": "coupled" }
struct SweepConfig {
  Algorithm algorithm = Algorithm::ogt;
  std::vector<int> sizes;
  double kappa = 50.0;
  double target_gap = 1e-8;
  SweepOptions options;
};

SweepConfig parse_sweep_config(const std::string& json_text);

/// Version line: tool version and the RNG fingerprint in hex.
std::string version_string();

/// Entry point with injectable streams; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ogt::cli

#pragma once

#include <string>
#include <vector>

#include "eqdist/config.hpp"

namespace eqdist {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitResourceError = 3;

std::string tool_version();

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct RunResult {
  int exit_code = kExitOk;
  std::vector<std::string> outputs;  // file names relative to the out dir
  std::vector<CheckResult> checks;
  std::vector<std::string> messages;
};

/// Runs one experiment, writing its CSV/JSON artifacts and manifest.json into
/// config.out_dir (created if needed).
RunResult run(const ExperimentConfig& config);

}  // namespace eqdist

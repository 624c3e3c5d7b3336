#pragma once

#include <string>
#include <vector>

#include "mvset/config.hpp"

namespace mvset {

/// One pass/fail comparison of a measured value against a threshold.
struct Check {
  std::string subcommand;
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  /// "<=" or ">=".
  std::string relation = "<=";
  bool passed = false;
};

struct RunResult {
  std::vector<Check> checks;
  /// "subcommand: message" for every subcommand that threw.
  std::vector<std::string> errors;
  /// Files written, relative to the output directory, in write order.
  std::vector<std::string> artifacts;

  bool passed() const;
  /// 0 when every check passed and nothing threw, 1 otherwise.
  int exit_code() const { return passed() ? 0 : 1; }
};

const std::vector<std::string>& subcommand_names();

/// Runs one subcommand (or "all") and writes its artifacts, a JSON report per
/// subcommand, the canonical config echo and failures.json into
/// config.directory. Nothing time-dependent is written, so identical configs
/// give byte-identical files.
RunResult run_subcommand(const std::string& name, const RunConfig& config);

}  // namespace mvset

#pragma once

// Runs a configured experiment and writes its artifacts:
//   manifest.json, traces/*.csv, plots/*.svg, report.txt

#include <iosfwd>
#include <string>
#include <vector>

#include "degenwave/config.hpp"

namespace degenwave {

enum ExitCode : int {
  kExitSuccess = 0,
  kExitConfigError = 1,
  kExitNumericalFailure = 2,
  kExitInvariantFailure = 3,
};

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct RunOutcome {
  int exit_code = kExitSuccess;
  std::string message;
  std::vector<CheckResult> checks;
  std::vector<std::string> files;  // relative to the output directory

  bool all_checks_passed() const;
};

// Validates, runs and writes artifacts. Configuration errors are reported
// before anything is written; numerical failures leave the partial artifacts
// plus a FAILED marker. Progress lines go to `log` (may be null).
RunOutcome run(const RunConfig& cfg, std::ostream* log = nullptr);

}  // namespace degenwave

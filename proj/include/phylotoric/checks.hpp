#pragma once

#include <string>
#include <vector>

namespace phylotoric {

/// Outcome of one reference check.
struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

struct CheckOptions {
  /// Directory holding k3p_claw.txt and k2p_claw_projected.txt.
  std::string golden_dir;
};

/// Directory of the bundled golden files.
std::string default_golden_dir();

/// Names accepted by run_checks, in run order.
std::vector<std::string> check_names();

/// Runs the named checks (all of them when `only` is empty).
/// Throws InputError for an unknown name.
std::vector<CheckResult> run_checks(const CheckOptions& options, const std::vector<std::string>& only = {});

}  // namespace phylotoric

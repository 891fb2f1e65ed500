#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace neurowire {

/// Outcome of one end-to-end check. Every measured quantity is kept as a
/// printable line so the same result serves the CLI and the test harness.
struct CheckResult {
  std::string name;
  bool passed = true;
  std::vector<std::string> notes;
  double seconds = 0.0;
  /// Wall-clock budget; 0 disables the time limit.
  double budget_seconds = 0.0;

  void expect(bool ok, const std::string& note);
};

CheckResult check_kernel_identities(std::uint64_t seed = 2024);
CheckResult check_gradient_bound();
CheckResult check_solver_against_duhamel();
CheckResult check_picard_contraction();
CheckResult check_noise_statistics(std::uint64_t seed = 7);

struct ExperimentCheckOptions {
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  double horizon = 5.0;
};

CheckResult check_experiments(const ExperimentCheckOptions& options = {});
CheckResult check_epsilon_limit();
CheckResult check_structural_invariants();

/// Runs every check in order; the experiment comparison is the slow one.
std::vector<CheckResult> run_all_checks(bool include_experiments = true);

}  // namespace neurowire

#pragma once

// Invariant suite over full and pruned plans, shared by the CLI and tests.

#include <cstdint>
#include <string>
#include <vector>

namespace lindil {

struct CheckResult {
  std::string name;
  std::int64_t cases = 0;
  std::int64_t failures = 0;
  std::string first_failure;  // counterexample parameters and observed values

  bool passed() const { return failures == 0; }
};

struct VerifyRange {
  int g_min = 1;
  int g_max = 8;
  int pruned_g_max = 6;  // sizes strictly between 2^g+1 and 2^(g+1)+1
};

std::vector<CheckResult> run_invariant_suite(const VerifyRange& range = {});

}  // namespace lindil

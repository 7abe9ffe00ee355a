#pragma once

// The acceptance battery: ten numbered criteria, each reduced to a list of
// individual checks.  A criterion passes only when every check passes and
// it stays within its runtime budget.

#include <cstdint>
#include <string>
#include <vector>

#include "wfx/verdict.hpp"

namespace wfx::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  Verdict verdict = Verdict::inconclusive;
  double seconds = 0.0;
  std::size_t checks = 0;
  std::string detail;
  /// First failures, capped; `checks - failures.size()` is not a pass count.
  std::vector<std::string> failures;
  std::size_t failure_count = 0;
};

struct SuiteOptions {
  std::uint64_t seed = 0;
  /// Criteria to run; empty means all.
  std::vector<int> only;
};

struct SuiteReport {
  std::vector<CriterionResult> criteria;
  double seconds = 0.0;
  Verdict overall() const;
};

inline constexpr int kCriterionCount = 10;

std::string criterion_name(int id);
CriterionResult run_criterion(int id, const SuiteOptions& opt = {});
SuiteReport run_paper_core(const SuiteOptions& opt = {});

}  // namespace wfx::verify

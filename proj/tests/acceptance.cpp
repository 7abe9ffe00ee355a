// Acceptance battery: one PASS/FAIL line per criterion.  Optional arguments
// restrict the run to the listed criterion ids.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "wfx/verify/suite.hpp"

int main(int argc, char** argv) {
  wfx::verify::SuiteOptions opt;
  for (int i = 1; i < argc; ++i) opt.only.push_back(std::atoi(argv[i]));
  bool all = true;
  for (int id = 1; id <= wfx::verify::kCriterionCount; ++id) {
    if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), id) == opt.only.end()) continue;
    const auto r = wfx::verify::run_criterion(id, opt);
    const bool ok = r.verdict == wfx::Verdict::pass;
    all = all && ok;
    std::printf("%s criterion %d: %s (%.1f s) %s\n", ok ? "PASS" : "FAIL", id, r.name.c_str(), r.seconds,
                r.detail.c_str());
    for (const auto& f : r.failures) std::printf("    %s\n", f.c_str());
    if (r.failure_count > r.failures.size())
      std::printf("    ... %zu more\n", r.failure_count - r.failures.size());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}

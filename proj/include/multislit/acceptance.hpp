#pragma once

// End-to-end acceptance criteria. Shared by the acceptance test binary and
// `multislit verify`.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace multislit::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  std::function<CriterionResult()> run;
};

const std::vector<Criterion>& criteria();

/// Runs every criterion, printing one PASS/FAIL line per criterion to `out`.
/// Returns the results in criterion order.
std::vector<CriterionResult> run_all(std::ostream& out);

}  // namespace multislit::acceptance

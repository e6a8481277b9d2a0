#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mheat {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs the numbered verification criteria (all 13 when `which` is empty),
// printing one PASS/FAIL line per criterion to `log`.
std::vector<CriterionResult> run_acceptance(std::ostream& log,
                                            const std::vector<int>& which = {});

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace mheat

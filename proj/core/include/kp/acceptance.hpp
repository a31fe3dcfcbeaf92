#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kp {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double measured = 0.0;   // worst observed quantity
  double threshold = 0.0;  // pinned acceptance threshold
  std::string note;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::vector<int> criteria;  // empty = run all 12
};

// Runs the acceptance pipeline; one result per criterion, in id order.
// Progress lines ("criterion N PASS/FAIL ...") go to `progress` when given.
std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& opts = AcceptanceOptions(),
    std::ostream* progress = nullptr);

}  // namespace kp

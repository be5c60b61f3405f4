#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ergolin {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool checks_passed = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  bool passed = false;  // checks passed within the time budget
  std::string detail;
};

std::vector<CriterionResult> run_acceptance(std::uint64_t seed, const std::vector<int>& only = {});
std::string acceptance_table(const std::vector<CriterionResult>& results);

}  // namespace ergolin

#pragma once

// The reproduction checklist: each criterion runs a fixed experiment, records
// what it measured and decides pass/fail at a pinned tolerance.

#include <string>
#include <vector>

#include "pi_forge/model_io.hpp"

namespace pi_forge {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  Json measured;
};

inline constexpr int kCriterionCount = 11;

/// Runs criterion `id` in 1..kCriterionCount.
CriterionResult run_criterion(int id);
std::vector<CriterionResult> run_acceptance();

Json acceptance_report(const std::vector<CriterionResult>& results);

}  // namespace pi_forge

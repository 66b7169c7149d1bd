#pragma once

#include <functional>
#include <string>
#include <vector>

namespace flowlab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the numbered acceptance criteria (all of them when `only` is empty).
/// Every tolerance is pinned in the implementation; `on_done` fires per
/// criterion as it finishes.
std::vector<CriterionResult> run_acceptance(
    int threads = 1, const std::vector<int>& only = {},
    const std::function<void(const CriterionResult&)>& on_done = {});

}  // namespace flowlab

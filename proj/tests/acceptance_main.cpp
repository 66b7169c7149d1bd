// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.
#include <cstdio>
#include <cstdlib>

#include "flowlab/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  bool all_pass = true;
  double total = 0.0;
  const auto results =
      flowlab::run_acceptance(1, only, [&](const flowlab::CriterionResult& r) {
        std::printf("[%2d] %-40s %s  (%6.2fs)  %s\n", r.id, r.name.c_str(),
                    r.pass ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
        std::fflush(stdout);
      });
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    total += r.seconds;
  }
  std::printf("%zu criteria, total %.1fs, %s\n", results.size(), total,
              all_pass ? "all passed" : "FAILURES present");
  return all_pass ? 0 : 1;
}

// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
// Usage: acceptance [criterion ...]  (default: all eight)

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "bbmlab/suite.hpp"

int main(int argc, char** argv) {
  bbm::SuiteOptions opt;
  if (const char* t = std::getenv("BBMLAB_THREADS")) bbm::set_max_threads(std::atoi(t));
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty()) which = {1, 2, 3, 4, 5, 6, 7, 8};

  int failed = 0;
  for (int k : which) {
    const bbm::GateResult g = bbm::run_criterion(k, opt);
    std::printf("criterion %d %s: %s (%.1f s)\n  %s\n", k, g.passed ? "PASS" : "FAIL", g.name.c_str(), g.seconds, g.detail.c_str());
    for (const auto& [key, v] : g.metrics) std::printf("    %-48s %.6g\n", key.c_str(), v);
    std::fflush(stdout);
    failed += g.passed ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(which.size()) - failed, which.size());
  return failed == 0 ? 0 : 1;
}

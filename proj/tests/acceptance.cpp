// Runs the twelve acceptance criteria and prints one line per criterion.
// Exit status is nonzero when any criterion fails.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <rosenlab/verify.hpp>

int main(int argc, char** argv) {
  rosenlab::SuiteOptions opt;
  if (const char* b = std::getenv("ROSENLAB_BUDGET"); b && *b) opt.budget = rosenlab::parseBudget(b);
  opt.threads = rosenlab::defaultThreads();
  std::vector<std::string> keys(argv + 1, argv + argc);
  int failed = 0;
  auto results = rosenlab::runSuite(opt, keys, [&](const rosenlab::CriterionResult& r) {
    std::printf("criterion %2d %-16s %s  %s  [%.1fs]\n", r.id, r.key.c_str(), r.passed ? "PASS" : "FAIL",
                r.summary.c_str(), r.seconds);
    std::fflush(stdout);
    failed += !r.passed;
  });
  std::printf("%zu criteria, %d failed\n", results.size(), failed);
  return failed == 0 ? 0 : 1;
}

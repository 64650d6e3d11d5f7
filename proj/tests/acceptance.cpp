#include <cstdio>
#include <cstdlib>
#include <string>

#include "qcext/verify.hpp"

// One line per criterion; exit status is the number of failures.
int main(int argc, char** argv) {
  std::uint64_t seed = 42;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  int failed = 0;
  for (int id = 1; id <= qcext::kCriteria; ++id) {
    const qcext::CriterionResult r = qcext::run_criterion(id, seed);
    std::printf("Criterion %d: %s (%.2f s) %s\n", id, r.passed ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
    std::fflush(stdout);
    if (!r.passed) ++failed;
  }
  return failed;
}

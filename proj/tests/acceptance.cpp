// One line per acceptance criterion; exit status 0 iff all pass.
#include <cstdio>

#include "cutloc/acceptance.hpp"

int main() {
  using namespace cutloc::acceptance;
  bool all = true;
  for (int id = 1; id <= 10; ++id) {
    const CriterionResult r = run_criterion(id);
    std::printf("%s\n", format_line(r).c_str());
    std::fflush(stdout);
    all = all && r.passed;
  }
  std::printf("acceptance: %s\n", all ? "all criteria pass" : "FAILURES");
  return all ? 0 : 1;
}

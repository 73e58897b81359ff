// Cross-validation gate at the pinned settings. Prints one line per check
// and a summary; exits nonzero when anything fails. Expect a few minutes of
// runtime, almost all of it in the 10000-trajectory ensembles.

#include <cstdio>

#include "mirrorvis/validation.hpp"

int main() {
  using namespace mirrorvis;
  const validation::Options opt;  // pinned defaults, no overrides here

  const auto results = validation::run_battery(opt, [](const auto& check) {
    std::printf("%s\n", validation::format_check(check).c_str());
    std::fflush(stdout);
  });

  std::size_t passed = 0;
  for (const auto& c : results) passed += c.pass ? 1 : 0;
  const bool ok = validation::all_pass(results);
  std::printf("RESULT: %s (%zu/%zu checks)\n", ok ? "PASS" : "FAIL", passed,
              results.size());
  return ok ? 0 : 1;
}

// Acceptance suite: one PASS/FAIL line per criterion, exit 0 iff all pass.

#include <CLI11.hpp>

#include <iostream>

#include "jkpencil/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  jkp::AcceptanceOptions opt;
  std::vector<int> which;
  app.add_option("--seed", opt.seed)->capture_default_str();
  app.add_option("--criterion", which, "Run only these criteria");
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  for (const auto& r : jkp::run_acceptance(opt, which)) {
    std::cout << jkp::format_result(r) << std::endl;
    all = all && r.passed;
  }
  std::cout << (all ? "all criteria passed" : "some criteria FAILED") << std::endl;
  return all ? 0 : 1;
}

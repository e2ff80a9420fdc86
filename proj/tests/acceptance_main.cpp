// Standalone acceptance runner: one pass/fail line per criterion, exit 1
// if anything fails. The CLI binary under test comes from the RBC_CLI
// environment variable.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "rbc/acceptance.hpp"

int main(int argc, char** argv) {
  std::string filter;
  if (argc > 1) filter = argv[1];
  const char* cli = std::getenv("RBC_CLI");

  const auto results =
      rbc::run_acceptance_criteria(filter, cli ? cli : "");
  bool all = true;
  for (const auto& r : results) {
    std::printf("[%s] %-36s %s\n", r.passed ? "PASS" : "FAIL",
                r.name.c_str(), r.detail.c_str());
    all = all && r.passed;
  }
  if (results.empty()) {
    std::printf("no criteria matched the filter\n");
    return 1;
  }
  return all ? 0 : 1;
}

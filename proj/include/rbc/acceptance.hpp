#pragma once

// The embedded acceptance suite: one entry per criterion, each returning
// pass/fail plus a short measured detail string. The same registry backs
// the `selftest` verb and the standalone acceptance runner.

#include <string>
#include <vector>

namespace rbc {

struct CriterionResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Runs criteria whose name contains `filter` (all when empty). `cli_path`
// locates the command-line binary for the CLI contract criterion; when it
// is empty that criterion fails with an explanatory detail.
std::vector<CriterionResult> run_acceptance_criteria(
    const std::string& filter, const std::string& cli_path);

}  // namespace rbc

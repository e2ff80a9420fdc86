#pragma once

// Verb engine behind the command-line tool. Each verb consumes a JSON
// input document, runs the certificates, and produces a JSON report with
// an echo of the effective configuration and the worst witness. Exit
// codes: 0 all certificates pass, 1 a certificate failed (report still
// written), 2 malformed input. Reports are deterministic: identical
// configuration and inputs serialize byte-identically (timing goes to
// stderr, never into the report).

#include <cstdint>
#include <optional>
#include <string>

namespace rbc {

struct RunConfig {
  std::string verb;
  std::string input_text;
  bool has_input = false;

  double tol = 1e-10;
  bool tol_set = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::uint64_t trials = 200;
  bool trials_set = false;
  std::string mode;  // "", "exhaustive" or "random"

  std::string direction;  // correspond: "phi" or "psi"
  std::string filter;     // selftest
  std::string cli_path;   // path of the binary, used by selftest
  std::optional<std::uint64_t> samples;  // volterra
  bool weight_sweep = false;             // volterra
  std::optional<std::uint64_t> max_word_len;  // quasidiag
};

// Runs the verb and writes the JSON report into *report (always non-empty,
// newline-terminated). Returns the exit code.
int run_verb(const RunConfig& config, std::string* report);

}  // namespace rbc

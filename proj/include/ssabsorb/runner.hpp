#pragma once

#include <iosfwd>
#include <string>

#include "ssabsorb/config.hpp"

namespace ssabsorb {

// Executes one CLI command against a parsed configuration, writing CSV (or
// PASS/FAIL lines for `validate`) to `out`.  Returns the process exit code:
// 0 on success, 4 on validation failure.  Config and numeric errors
// propagate as exceptions for the CLI wrapper to map to codes 2 and 3.
int run_command(const std::string& command, const run_config& cfg,
                std::ostream& out);

// Acceptance suite shared by `ssabsorb validate` and the acceptance test
// binary: one PASS/FAIL line per criterion; returns the number of failures.
// `mc_paths` scales criterion 8 (the contract value is 200000).
int run_validation(std::ostream& out, long long mc_paths = 200000);

}  // namespace ssabsorb

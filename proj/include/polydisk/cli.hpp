#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polydisk {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,            // success / decided
  kExitInvalid = 1,       // axiom validation failure
  kExitMalformed = 2,     // malformed input or usage error
  kExitInconclusive = 3,  // randomized procedure undecided
};

/// Runs the tool on `args` (without the program name); JSON reports go to
/// `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polydisk

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace regemb {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,      // bad flags or bad input data
  kExitViolation = 2,  // a non-regular configuration was found
  kExitFailure = 3,    // a pipeline (reduction) failed
};

const char* version();

// Runs the tool on `args` (without the program name). Reports go to `out`,
// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace regemb

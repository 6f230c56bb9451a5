#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace threshold_lab::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInternalError = 1,
  kValidationError = 2,
  kCapExceeded = 3,
  kAssertFailed = 4,
};

// Runs one command. `args` excludes the program name. Reports go to `out`
// unless -o is given; diagnostics and generated seeds go to `err`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace threshold_lab::cli

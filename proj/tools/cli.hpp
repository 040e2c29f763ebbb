#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace supertrace::cli {

enum ExitCode : int {
  kSuccess = 0,
  kCheckFailed = 1,
  kInputError = 2,
  kModeUnsupported = 3,
};

/// Runs one command line (args exclude the program name) and returns its exit code.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace supertrace::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace folkseg::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kDataError = 1,
  kUsageError = 2,
  kNumericalError = 3,
};

/// Runs the command line `args` (args[0] is the program name). Reports go
/// to `out` unless a subcommand writes to --out; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace folkseg::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace genbound::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kNumericalWarning = 3,
  kPropertyViolation = 4,
};

/// Runs the command line `args` (args[0] is the program name). Primary output
/// goes to `out` unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace genbound::cli

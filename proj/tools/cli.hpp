#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tensornorm::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kConditionViolated = 2,
  kNotWeaklyIrreducible = 3,
  kNumericalBreakdown = 4,
  kNotPartiallySymmetric = 5,
  kNotConverged = 6,
  kVerifyFailed = 7,
};

/// Runs one command line (without the program name) and returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tensornorm::cli

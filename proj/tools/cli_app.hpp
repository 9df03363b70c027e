#pragma once

#include <ostream>

namespace qlinz::cli {

enum ExitCode {
  kExitOk = 0,
  kExitNegative = 1,
  kExitUsage = 2,
  kExitParameter = 3,
  kExitPrecondition = 4,
  kExitRefusal = 5,
  kExitExactness = 6,
  kExitNumerical = 7,
};

/// Runs the command line; reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qlinz::cli

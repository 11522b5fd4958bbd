#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ctpower::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitInputError = 2,
  kExitUnsupported = 3,
};

/// Runs the command line `args` (without the program name). Reports go to
/// `out` unless --out is given; notices and errors go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ctpower::cli

#pragma once

#include <string>
#include <vector>

#include "hvlab/io.hpp"

namespace hvlab::cli {

/// 0: holds / feasible / colorable / match.
/// 1: violation / infeasible / uncolorable / mismatch.
/// 2: input or usage error.
enum ExitCode : int { kHolds = 0, kViolation = 1, kInputError = 2 };

struct CommandResult {
  int exit_code = kHolds;
  io::Json payload;        // written to stdout when not null
  std::string diagnostic;  // one line for stderr, set on exit code 2
  std::string help;        // usage text for --help
};

/// Runs one command line (without the program name). Side effects are limited
/// to files named by --csv / --emit.
CommandResult dispatch(const std::vector<std::string>& args);

/// dispatch + printing; returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hvlab::cli

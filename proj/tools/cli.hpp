#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace symdyn::cli {

// Exit codes: 0 success, 1 a checked property failed, 2 usage or config error.
enum ExitCode { kOk = 0, kViolation = 1, kUsage = 2 };

// Runs one subcommand. args excludes the program name. Results go to out (or
// to --output), diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace symdyn::cli

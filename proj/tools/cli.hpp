#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pathdep::cli {

/// Exit codes: 0 success, 1 a check was violated (or nothing was found),
/// 2 usage, parse or library error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolated = 1;
inline constexpr int kExitError = 2;

/// Runs one subcommand; `args` excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pathdep::cli

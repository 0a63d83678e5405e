#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace suprec {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitCheckFailed = 3;

/// Runs one invocation; args excludes the program name. Data goes to out,
/// diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace suprec

#pragma once

#include <iosfwd>

namespace cak {

/// Exit codes of the command-line tool.
enum ExitCode : int { exit_holds = 0, exit_fails = 1, exit_input_error = 2, exit_cap_exceeded = 3 };

/// Runs the command-line tool; reports go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cak

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace agv
{

/// Exit codes of the command-line tool.
enum ExitCode : int
{
    kExitTrue = 0,
    kExitFalse = 1,
    kExitInconclusive = 2,
    kExitError = 3
};

/// Runs `agvcheck` with the given arguments (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace agv

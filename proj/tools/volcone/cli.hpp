#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace volcone::cli {

/// Exit codes of the volcone command.
enum ExitCode : int { kOk = 0, kViolation = 1, kUsage = 2 };

/// Parses `args` (without the program name), runs the subcommand and writes
/// its report to `out` (or to --out). Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace volcone::cli

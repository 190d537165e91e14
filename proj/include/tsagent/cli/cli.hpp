#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tsagent::cli {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs one invocation (args excludes the program name). Primary CSV output goes to `out`
/// unless --output is given; diagnostics and reports go to `err` unless --report is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tsagent::cli

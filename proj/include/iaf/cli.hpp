#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace iaf {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumeric = 3 };

/// Runs one CLI invocation. args[0] is the program name. The one-line
/// summary goes to `out`, diagnostics to `err`; CSV goes to the -o path.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace iaf

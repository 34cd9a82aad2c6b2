#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cdgraph {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitHolds = 0,
    kExitFailed = 1,
    kExitUsage = 2,
};

/// Runs one command. `args` excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace cdgraph

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace relgraph {

/// Exit codes of the command-line driver.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitGeneration = 3,
    kExitIo = 4,
    kExitAdapter = 5,
};

/// Regeneration attempts for `gen` before giving up with kExitGeneration.
inline constexpr int kGenerationAttempts = 32;

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace relgraph

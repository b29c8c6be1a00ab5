#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ellhyp::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // a verification case failed
inline constexpr int kExitUsage = 2;    // bad flags, schema or config error
inline constexpr int kExitNumeric = 3;  // pole hit, non-convergence, starvation

/// Runs the command line (args excludes the program name) and returns the
/// process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace ellhyp::cli

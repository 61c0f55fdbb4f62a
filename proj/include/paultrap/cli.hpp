#pragma once

#include <iosfwd>

namespace paultrap::cli {

enum ExitCode : int {
    kSuccess = 0,
    kComputationError = 1,
    kUsageError = 2,
};

/// Entry point behind the `paultrap` executable. Subcommands: trajectory,
/// stability, qnd-check, probability, oracle.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace paultrap::cli

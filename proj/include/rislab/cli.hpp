#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rislab::cli {

enum ExitCode { kPass = 0, kNumericalFailure = 1, kUsageError = 2 };

/// Entry point of the command-line tool; args excludes the program name.
/// Subcommands: solve, jump-cost, functional, bvcheck, recover, sweep,
/// stochastic, conjugate-check.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rislab::cli

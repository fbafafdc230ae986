#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qw::cli {

// Runs the qwalk command line: subcommands synth, evolve, converge, dirac.
// Returns the process exit code: 0 success, 2 precondition/config error,
// 3 residual/acceptance gate failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qw::cli

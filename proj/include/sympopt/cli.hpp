#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sympopt::cli {

// Command-line entry point; argv-style arguments without the program name.
// Returns the process exit code: 0 success/converged, 1 failed checks,
// 2 configuration or argument errors, 3 optimizer failure.
int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sympopt::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fractarray::cli {

/// Exit codes: 0 success, 1 infeasible search or no successful simulation
/// trial, 2 usage or input error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fractarray::cli

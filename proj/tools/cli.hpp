#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace collabnet::cli {

/// Runs one command line (args excludes the program name). Returns the
/// process exit status: 0 ok, 1 validation error or bad usage, 2 internal error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace collabnet::cli

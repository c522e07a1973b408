#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mftlex::cli {

enum ExitCode : int { kSuccess = 0, kDataError = 1, kUsageError = 2 };

// Entry point of the `mftlex` tool. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mftlex::cli

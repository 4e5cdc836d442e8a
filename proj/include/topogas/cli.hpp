#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace topogas::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kDataError = 2 };

/// Runs one `topogas` invocation. `args` excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace topogas::cli

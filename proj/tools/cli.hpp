#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace quadsum::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kVerificationFailed = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kIoError = 3;

/// Runs the command line `args` (without the program name), writing results
/// to `out` and diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace quadsum::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lodecomp::cli {

// Exit-code contract.
inline constexpr int kOk = 0;
inline constexpr int kVerificationFailed = 1;
inline constexpr int kBadInput = 2;
inline constexpr int kInternalError = 3;

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lodecomp::cli

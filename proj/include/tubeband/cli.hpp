#pragma once

// Command-line front end. Subcommands: fit, simulate, quantile.
// Exit codes: 0 success, 2 malformed input or flags, 3 numerical failure.

#include <iosfwd>
#include <string>
#include <vector>

namespace tubeband::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace tubeband::cli

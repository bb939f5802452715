#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ssmc {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;  // NON-STAR-FREE, or a failed verification
inline constexpr int kExitRefused = 2;
inline constexpr int kExitUsage = 3;
inline constexpr int kExitInternal = 4;

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ssmc

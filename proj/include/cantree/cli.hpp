#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace cantree {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs the command line `args` (without the program name). Results go to
// `out` unless --out is given; usage text and diagnostics go to `err`.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace cantree

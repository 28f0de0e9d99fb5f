#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tsb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Subcommands: simulate, sweep, bounds, plot. `args` excludes the program
// name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tsb::cli

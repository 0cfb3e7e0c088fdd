#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cdpoly::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand. `args` excludes the program name. Returns 0 when
/// every check passes, 1 when a check or a numerical step fails (the first
/// failure is named on `err`), and 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cdpoly::cli

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace modfactor {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs the `modfactor` command line on `args` (without the program name).
/// Reports go to `out`, diagnostics to `err`. Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace modfactor

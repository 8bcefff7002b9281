#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace treeca::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitBudget = 3;

/// Runs one subcommand. `args` excludes the program name. Reports go to `out`,
/// diagnostics to `err`; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace treeca::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace varbound {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitInvariant = 3;

/// Runs one CLI invocation. `args` excludes the program name. Reports go to
/// `out` unless --output names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace varbound

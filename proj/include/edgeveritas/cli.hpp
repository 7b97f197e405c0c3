#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace edgeveritas {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `edgeveritas` tool. `args` excludes the program name.
/// Artifacts go to the `--out` paths, or to `out` when no path is given;
/// diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace edgeveritas

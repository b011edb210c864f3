#pragma once

#include <iosfwd>

namespace orchid::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand. Machine-readable JSON lines go to `out`, human
/// summaries and diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace orchid::cli

#pragma once

#include <iosfwd>

namespace wsvm {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitValidationFailure = 2;

/// Entry point for the `wsvm` tool: subcommands `optimize`, `quality` and
/// `seed {ball,cube}`. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wsvm

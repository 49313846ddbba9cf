#pragma once

#include <ostream>

namespace ramcast::cli {

// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "RAMCAST_OUT_DIR";

/// Parses argv and runs one subcommand. Returns the process exit status:
/// 0 on success, 1 when a check fails, 2 on any error. Errors are reported
/// as a single "error: ..." line on `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ramcast::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rgg1d::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (args excludes the program name). The document goes
/// to `out` unless --out names a file; diagnostics go to `err`.
/// Returns 0 on success, 1 on a computation error, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rgg1d::cli

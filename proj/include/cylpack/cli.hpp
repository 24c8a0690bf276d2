#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cylpack {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailed = 2;

/// Runs one command line (without the program name). Reports go to the --out
/// file, or to `out` when no file is given; diagnostics go to `err`.
/// Returns 0 on success, 2 when a check fails, 1 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace cylpack

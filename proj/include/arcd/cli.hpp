#pragma once

#include <iosfwd>

namespace arcd::cli {

/// Exit codes: 0 success, 1 numerical failure, 2 usage error.
inline constexpr int kOk = 0;
inline constexpr int kNumericalFailure = 1;
inline constexpr int kUsage = 2;

/// Runs the command line in-process, writing reports to `out` and
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace arcd::cli

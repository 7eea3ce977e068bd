#pragma once

#include <ostream>

namespace gpfluct::cli {

/// Exit codes: 0 success (or fail-to-reject), 1 usage error, 2 runtime
/// error, 3 symmetry test rejected, 4 inexact result under --require-exact.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitError = 2;
inline constexpr int kExitReject = 3;
inline constexpr int kExitInexact = 4;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gpfluct::cli

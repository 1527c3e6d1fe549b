/// @file cli.hpp
/// @brief Entry point of the `cvflab` command-line tool.
///
/// Exit codes: 0 success, 1 usage error, 2 non-convergence or a scale check
/// above tolerance, 3 bad configuration, non-invertible initial map or
/// malformed snapshot, 4 any other failure.
#pragma once

#include <ostream>

namespace cvf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNonConvergence = 2;
inline constexpr int kExitBadInput = 3;
inline constexpr int kExitFailure = 4;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cvf::cli

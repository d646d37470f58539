#pragma once

#include <iosfwd>

namespace bikerisk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitData = 2;

/// Runs one subcommand (ingest, estimate, route, simulate, stats, contours,
/// compare-baselines). Returns 0, 1 on invalid arguments or parameters, and
/// 2 when the input data cannot be used.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bikerisk::cli

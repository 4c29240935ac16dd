#pragma once

#include <ostream>

namespace itosynth {

inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitStatFail = 2;

/// Subcommands: sample-excursion, synthesize, laplace, verify, identity-check,
/// stable-index, check. Exit 0 on pass, 2 on statistical failure, 1 on usage
/// or model errors.
int cli_run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace itosynth

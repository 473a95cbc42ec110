#pragma once

#include <iosfwd>

namespace psn {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the psn tool. Reports go to out, diagnostics to err.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace psn

#pragma once

#include <ostream>

namespace chorediv {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;  // ratio above alpha, or a safety check failed
inline constexpr int kExitUsage = 2;
inline constexpr int kExitResource = 3;   // enumeration cap hit

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace chorediv

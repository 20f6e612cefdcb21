#pragma once

#include <iosfwd>

namespace rdrl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Entry point for the `rdrl` tool: train, sweep, evaluate, score, trace, adapt.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rdrl::cli

#pragma once

#include <iosfwd>

namespace qaoacut::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCapacity = 3;
inline constexpr int kExitProtocol = 4;

int run_cli(int argc, char **argv, std::ostream &out, std::ostream &err);

} // namespace qaoacut::cli

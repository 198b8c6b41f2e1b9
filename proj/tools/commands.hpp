#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sgcauc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitRange = 3;

/// Environment variable consulted when --seed is not given.
inline constexpr const char* kSeedEnv = "SGCAUC_SEED";

/// Entry point shared by main() and the CLI tests. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sgcauc::cli

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace latpois {

inline constexpr const char* kSeedEnvVar = "LATPOIS_SEED";

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitUsage = 2, kExitBudget = 3 };

/// Runs the command line; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace latpois

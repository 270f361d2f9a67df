#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace relcov::cli {

/// Environment variable naming the default config file.
inline constexpr const char* kConfigEnv = "RELCOV_CONFIG";

enum ExitCode : int { kOk = 0, kUsage = 1, kNumerical = 2 };

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relcov::cli

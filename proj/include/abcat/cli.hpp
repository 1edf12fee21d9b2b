#pragma once

#include <string>
#include <vector>

namespace abcat {

/// Exit codes of the command-line driver.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct CliResult {
  int exit_code = kExitPass;
  std::string out;  // report (or help text) destined for stdout
  std::string err;  // diagnostics destined for stderr
};

/// Runs one batch command. `args` excludes the program name. Never throws;
/// every error becomes exit code 2 with a message in `err`. When --output is
/// given the report is written there and `out` stays empty.
CliResult run_cli(const std::vector<std::string>& args);

}  // namespace abcat

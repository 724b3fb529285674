#pragma once

// Command-line front end: classify, norms, verify, search and pinv.
// Exit codes: 0 success, 1 theorem violations, 2 input error,
// 3 optimizer not converged or search exhausted.

#include "opineq/report.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace opineq {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolations = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNotConverged = 3;

/// Defaults shared by all subcommands. A config file is a JSON object with
/// any subset of these keys.
struct CliConfig {
  double classify_tol = kDefaultClassTol;
  double verify_tol = 1e-9;
  double match_tol = 1e-4;
  std::uint64_t seed = 0;
  int restarts = 32;
  int iterations = 500;
  double stagnation_tol = 1e-10;
  Index dim = 4;
  int trials = 1000;
};

CliConfig parse_config(std::string_view bytes);
CliConfig load_config(const std::filesystem::path& path);
Json to_json(const CliConfig& c);

/// Runs one invocation; args exclude the program name. The result payload is
/// written to out as canonical JSON, diagnostics to err.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace opineq

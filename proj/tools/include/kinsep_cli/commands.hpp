#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace kinsep::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericFailure = 3, kBranchLost = 4 };

struct CommandOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out_dir;
  bool svg = false;
  std::optional<std::string> mode;
  std::optional<std::string> grid;
  std::optional<double> tol;
  std::optional<std::string> pose;  ///< "x,y[,phi]"
  std::optional<std::string> q;     ///< "q1,q2[,q3]"
  unsigned threads = 0;
};

/// Runs one subcommand and maps failures to exit codes; messages go to `err`.
int run_command(const std::string& name, const CommandOptions& options, std::ostream& out, std::ostream& err);

const std::vector<std::string>& command_names();

}  // namespace kinsep::cli

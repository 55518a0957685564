#pragma once

#include "matool/cli/config.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace matool::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kVerification = 2 };

struct Outcome {
  int exit_code = kOk;
  nlohmann::json report;
  std::vector<std::string> lines; // human summary for stdout
  std::vector<std::string> artifacts;
};

const std::vector<std::string>& subcommands();

/// Runs one analysis and writes its artifacts under cfg.output.out_dir.
Outcome run_subcommand(const std::string& name, const RunConfig& cfg, bool example21 = false);

/// Full entry point: argument parsing, config loading, error mapping to exit codes.
int run(int argc, char** argv);

} // namespace matool::cli

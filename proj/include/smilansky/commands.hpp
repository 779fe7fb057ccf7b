#pragma once

#include <exception>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "smilansky/config.hpp"
#include "smilansky/report.hpp"

namespace smilansky {

enum ExitCode { kExitOk = 0, kExitInequality = 1, kExitUsage = 2, kExitNumerical = 3 };

struct RunOptions {
  std::filesystem::path out_dir;        // empty: no files
  bool dump_matrix = false;             // spectrum1d / spectrum2d only; needs out_dir
  std::filesystem::path fixture_dir;    // for `report`
};

struct RunResult {
  int exit_code = kExitOk;
  ReportBundle bundle;
};

const std::vector<std::string>& command_names();

// Validates the config, runs one command and writes the artifacts.
// Errors propagate; map them with exit_code_for.
RunResult run_command(std::string_view command, const RunConfig& config, const RunOptions& options = {});

int exit_code_for(const std::exception& e);

}  // namespace smilansky

#pragma once

#include "conley/config.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace conley {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitNumeric = 2, kExitProperty = 3 };

/// Command-line overrides applied on top of the configuration file.
struct CommandOptions {
  std::optional<std::filesystem::path> config;
  std::filesystem::path out_dir = ".";
  std::optional<int> workers;
  std::optional<std::pair<int, int>> seed_shift_range;
  std::optional<double> beta;
};

struct CommandResult {
  int exit_code = kExitOk;
  nlohmann::json report;
  std::string error;
};

const std::vector<std::string>& command_names();

/// Applies the overrides (ConfigError on invalid values).
void apply_overrides(RunConfig& config, const CommandOptions& options);

/// Runs one subcommand, writes the report and CSV files under options.out_dir,
/// and maps failures to exit codes. Never throws for computation errors.
CommandResult run_command(const std::string& command, const CommandOptions& options);
CommandResult run_command(const std::string& command, RunConfig config, const CommandOptions& options);

/// Report without the "timings" member, for reproducibility comparisons.
nlohmann::json strip_timings(nlohmann::json report);

}  // namespace conley

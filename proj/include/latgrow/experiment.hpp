#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "latgrow/config.hpp"
#include "latgrow/io.hpp"

namespace latgrow {

/// Exit codes of run_experiment and the CLI.
enum ExitCode : int { kExitOk = 0, kExitInvariant = 1, kExitConfig = 2, kExitIo = 3 };

Provenance provenance_for(const ExperimentConfig& config);

/// Runs every rep and writes artifacts under config "out". Exceptions are
/// mapped to exit codes and reported on `log`.
int run_experiment(const ExperimentConfig& config, std::ostream& log);

/// Like run_experiment but lets exceptions through.
void execute_experiment(const ExperimentConfig& config, std::ostream& log);

struct PresetRun {
  std::string name;  // subdirectory
  ExperimentConfig config;
};

std::vector<std::string> preset_names();

/// Configurations for a named preset; `overrides` (already raw key=value)
/// replace preset values, and "out" is suffixed with the variant name.
std::vector<PresetRun> preset(const std::string& name, const std::map<std::string, std::string>& overrides = {});

}  // namespace latgrow

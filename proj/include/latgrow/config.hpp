#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "latgrow/rational.hpp"

namespace latgrow {

/// Rejected configuration; the CLI maps it to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::string_view kProcesses[] = {"fpp",         "compete",    "fpphe",    "fpphe-det",
                                                  "mdla-direct", "mdla-holes", "schedule", "sweep"};

/// Flat key=value configuration. Values are kept as validated text so that
/// emit/parse round-trips exactly; typed accessors convert on demand.
class ExperimentConfig {
 public:
  ExperimentConfig() = default;

  const std::map<std::string, std::string>& values() const { return values_; }
  std::string process() const { return text("process"); }

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string text(const std::string& key) const;
  double real(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  RationalTime rational(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;

  /// Sorted "key=value" lines.
  std::string emit() const;
  /// Hash of the emitted text without the keys that cannot change results
  /// (output directory, thread count).
  std::string hash() const;

  bool operator==(const ExperimentConfig& o) const = default;

  friend ExperimentConfig validate_config(std::map<std::string, std::string> raw);

 private:
  std::map<std::string, std::string> values_;
};

/// Checks every key against the schema of its process and fills defaults.
ExperimentConfig validate_config(std::map<std::string, std::string> raw);

/// "key = value" lines; '#' starts a comment line.
std::map<std::string, std::string> parse_key_values(std::string_view text);
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

/// Keys accepted by a process, with their defaults (empty when optional).
std::vector<std::pair<std::string, std::string>> config_keys(std::string_view process);

}  // namespace latgrow

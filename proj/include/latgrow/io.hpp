#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace latgrow {

/// Failure writing an artifact; the CLI maps it to exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// git-describe style version baked in at build time.
std::string version();

/// What every artifact carries about the run that produced it.
struct Provenance {
  std::string config_hash;
  std::string version;
  std::map<std::string, std::string> switches;  // semantics switches

  nlohmann::json to_json() const;
  /// One line, no newline: "config_hash=... version=... key=value ...".
  std::string line() const;
};

/// FNV-1a 64 of the text, as 16 hex digits.
std::string fnv1a_hex(std::string_view text);

/// 12 significant digits, "." decimal separator.
std::string format_real(double v);

/// RFC 4180 table. Provenance goes in leading "# " comment lines.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> row);
  std::size_t rows() const { return rows_.size(); }
  std::string str(const Provenance* prov = nullptr) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string csv_escape(const std::string& field);

/// Writes through a temporary file and renames; throws IoError.
void write_file(const std::filesystem::path& path, const std::string& bytes);
void write_json(const std::filesystem::path& path, const nlohmann::json& j, const Provenance& prov);

}  // namespace latgrow

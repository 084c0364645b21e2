#include "latgrow/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#ifndef LATGROW_VERSION
#define LATGROW_VERSION "unknown"
#endif

namespace latgrow {

std::string version() { return LATGROW_VERSION; }

nlohmann::json Provenance::to_json() const {
  return {{"config_hash", config_hash}, {"version", version}, {"switches", switches}};
}

std::string Provenance::line() const {
  std::string s = "config_hash=" + config_hash + " version=" + version;
  for (const auto& [k, v] : switches) s += " " + k + "=" + v;
  return s;
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw std::logic_error("csv row width does not match header");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str(const Provenance* prov) const {
  std::ostringstream out;
  if (prov != nullptr) out << "# " << prov->line() << "\r\n";
  auto emit = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out << ',';
      out << csv_escape(r[i]);
    }
    out << "\r\n";
  };
  emit(header_);
  for (const auto& r : rows_) emit(r);
  return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp.string());
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    f.flush();
    if (!f) throw IoError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename to " + path.string() + ": " + ec.message());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j, const Provenance& prov) {
  nlohmann::json doc = j;
  doc["provenance"] = prov.to_json();
  write_file(path, doc.dump(2) + "\n");
}

}  // namespace latgrow

#include "latgrow/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "latgrow/io.hpp"
#include "latgrow/lattice.hpp"

namespace latgrow {

namespace {

enum class Kind { real, integer, rational, text, real_list, choice };

struct Range {
  double lo = -INFINITY;
  double hi = INFINITY;
  bool lo_open = false;
  bool hi_open = false;
};

struct KeySpec {
  std::string name;
  Kind kind;
  std::string def;  // empty: optional, no default
  Range range;
  std::vector<std::string> choices;
  std::vector<std::string> processes;  // empty: every process
};

Range closed(double lo, double hi) { return {lo, hi, false, false}; }
Range open(double lo, double hi) { return {lo, hi, true, true}; }
Range above(double lo) { return {lo, INFINITY, true, false}; }
Range at_least(double lo) { return {lo, INFINITY, false, false}; }

const std::vector<KeySpec>& schema() {
  static const std::vector<KeySpec> s = [] {
    std::vector<std::string> all(std::begin(kProcesses), std::end(kProcesses));
    std::vector<KeySpec> v;
    v.push_back({"process", Kind::choice, "", {}, all, {}});
    v.push_back({"seed", Kind::integer, "1", at_least(0), {}, {}});
    v.push_back({"window", Kind::integer, "400", at_least(1), {}, {}});
    v.push_back({"t_max", Kind::real, "1000", above(0), {}, {}});
    v.push_back({"reps", Kind::integer, "1", at_least(0), {}, {}});
    v.push_back({"out", Kind::text, "latgrow-out", {}, {}, {}});
    v.push_back({"snapshot_times", Kind::real_list, "", at_least(0), {}, {}});
    v.push_back({"threads", Kind::integer, "", at_least(1), {}, {}});
    v.push_back({"dim", Kind::integer, "2", closed(1, kMaxDim), {}, {}});
    v.push_back({"margin", Kind::integer, "10", at_least(0), {}, {}});
    v.push_back({"seed_rule", Kind::choice, "absorb", {}, {"absorb", "block"}, {"fpphe", "fpphe-det", "sweep"}});
    v.push_back({"placement", Kind::choice, "axis", {}, {"axis", "random_boundary"}, {"compete"}});

    v.push_back({"rate", Kind::real, "1", above(0), {}, {"fpp"}});
    v.push_back({"delta", Kind::real, "", open(0, 1), {}, {"fpp"}});

    v.push_back({"lambda", Kind::real, "0.5", open(0, 1), {}, {"compete", "fpphe", "schedule"}});
    v.push_back({"lambda", Kind::rational, "1/2", open(0, 1), {}, {"fpphe-det"}});
    v.push_back({"r", Kind::real, "5", above(0), {}, {"compete"}});
    v.push_back({"alpha", Kind::real, "4", above(1), {}, {"compete", "schedule"}});
    v.push_back({"c_hat", Kind::real, "", above(0), {}, {"compete"}});

    v.push_back({"p", Kind::real, "0.01", {0, 1, false, true}, {}, {"fpphe", "fpphe-det"}});
    v.push_back({"mu", Kind::real, "0.5", {0, 1, true, false}, {}, {"mdla-direct", "mdla-holes"}});

    v.push_back({"epsilon", Kind::real, "0.05", open(0, 1), {}, {"schedule"}});
    v.push_back({"c1", Kind::real, "1", above(0), {}, {"schedule"}});
    v.push_back({"c_fpp", Kind::real, "1.6645", above(0), {}, {"schedule"}});
    v.push_back({"c_fpp_prime", Kind::real, "2.414", above(0), {}, {"schedule"}});
    v.push_back({"L1", Kind::real, "1000000", above(0), {}, {"schedule"}});
    v.push_back({"k_max", Kind::integer, "50", at_least(1), {}, {"schedule"}});
    v.push_back({"a", Kind::real, "1", above(0), {}, {"schedule"}});
    v.push_back({"c_rec", Kind::real, "1", above(0), {}, {"schedule"}});
    v.push_back({"rho_bar", Kind::real, "1e-8", {0, 1, false, true}, {}, {"schedule"}});
    v.push_back({"c_q", Kind::real, "1", above(0), {}, {"schedule"}});

    v.push_back({"p_grid", Kind::real_list, "0.001,0.01,0.05,0.2", {0, 1, false, true}, {}, {"sweep"}});
    v.push_back({"lambda_grid", Kind::real_list, "0.5", open(0, 1), {}, {"sweep"}});
    return v;
  }();
  return s;
}

bool applies(const KeySpec& k, const std::string& process) {
  return k.processes.empty() || std::find(k.processes.begin(), k.processes.end(), process) != k.processes.end();
}

const KeySpec* find_spec(const std::string& name, const std::string& process) {
  for (const auto& k : schema()) {
    if (k.name == name && applies(k, process)) return &k;
  }
  return nullptr;
}

bool known_key(const std::string& name) {
  return std::any_of(schema().begin(), schema().end(), [&](const KeySpec& k) { return k.name == name; });
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<double> to_real(std::string_view s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<std::int64_t> to_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  return out;
}

void check_range(const KeySpec& k, double v) {
  const Range& r = k.range;
  bool ok = (r.lo_open ? v > r.lo : v >= r.lo) && (r.hi_open ? v < r.hi : v <= r.hi);
  if (!ok) {
    std::ostringstream m;
    m << "key '" << k.name << "': value " << v << " outside " << (r.lo_open ? "(" : "[") << r.lo << ", " << r.hi
      << (r.hi_open ? ")" : "]");
    throw ConfigError(m.str());
  }
}

std::string canonical(const KeySpec& k, const std::string& raw) {
  auto bad = [&](const char* what) {
    return ConfigError("key '" + k.name + "': expected " + what + ", got '" + raw + "'");
  };
  switch (k.kind) {
    case Kind::real: {
      auto v = to_real(raw);
      if (!v) throw bad("a real number");
      check_range(k, *v);
      return raw;
    }
    case Kind::integer: {
      auto v = to_int(raw);
      if (!v) throw bad("an integer");
      check_range(k, static_cast<double>(*v));
      return raw;
    }
    case Kind::rational: {
      RationalTime q;
      try {
        q = RationalTime::parse(raw);
      } catch (const std::exception&) {
        throw bad("an exact fraction n/d");
      }
      check_range(k, q.to_double());
      return q.str();
    }
    case Kind::real_list: {
      std::string out;
      for (const auto& item : split_list(raw)) {
        auto v = to_real(item);
        if (!v) throw bad("a comma-separated list of reals");
        check_range(k, *v);
        if (!out.empty()) out += ",";
        out += item;
      }
      return out;
    }
    case Kind::choice:
      if (std::find(k.choices.begin(), k.choices.end(), raw) == k.choices.end()) throw bad("one of the listed choices");
      return raw;
    case Kind::text:
      if (raw.empty() || raw.find('\n') != std::string::npos) throw bad("a non-empty single-line string");
      return raw;
  }
  return raw;
}

}  // namespace

ExperimentConfig validate_config(std::map<std::string, std::string> raw) {
  auto pit = raw.find("process");
  if (pit == raw.end()) throw ConfigError("key 'process' is required");
  const KeySpec* pspec = find_spec("process", pit->second);
  canonical(*pspec, pit->second);
  const std::string process = pit->second;

  ExperimentConfig cfg;
  for (const auto& [key, value] : raw) {
    if (!known_key(key)) throw ConfigError("unknown key '" + key + "'");
    const KeySpec* spec = find_spec(key, process);
    if (spec == nullptr) throw ConfigError("key '" + key + "' does not apply to process " + process);
    cfg.values_[key] = canonical(*spec, trim(value));
  }
  for (const auto& k : schema()) {
    if (applies(k, process) && !k.def.empty() && !cfg.values_.count(k.name)) cfg.values_[k.name] = k.def;
  }
  if (process == "fpphe-det") {
    try {
      RationalTime::parse(cfg.values_["t_max"]);
    } catch (const std::exception&) {
      throw ConfigError("key 't_max': fpphe-det needs an exact value (integer or n/d)");
    }
  }
  if (process == "schedule" && cfg.real("c_fpp") > cfg.real("c_fpp_prime")) {
    throw ConfigError("key 'c_fpp': must not exceed c_fpp_prime");
  }
  if (cfg.integer("margin") >= cfg.integer("window")) throw ConfigError("key 'margin': must be below window");
  return cfg;
}

std::string ExperimentConfig::text(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("key '" + key + "' is not set");
  return it->second;
}

double ExperimentConfig::real(const std::string& key) const {
  auto v = to_real(text(key));
  if (!v) throw ConfigError("key '" + key + "' is not a real");
  return *v;
}

std::int64_t ExperimentConfig::integer(const std::string& key) const {
  auto v = to_int(text(key));
  if (!v) throw ConfigError("key '" + key + "' is not an integer");
  return *v;
}

RationalTime ExperimentConfig::rational(const std::string& key) const {
  try {
    return RationalTime::parse(text(key));
  } catch (const DomainError&) {
    throw ConfigError("key '" + key + "' is not an exact fraction");
  }
}

std::vector<double> ExperimentConfig::reals(const std::string& key) const {
  std::vector<double> out;
  if (!has(key)) return out;
  for (const auto& item : split_list(text(key))) out.push_back(*to_real(item));
  return out;
}

std::string ExperimentConfig::emit() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
  return out;
}

std::string ExperimentConfig::hash() const {
  std::string text;
  for (const auto& [k, v] : values_) {
    if (k == "out" || k == "threads") continue;
    text += k + "=" + v + "\n";
  }
  return fnv1a_hex(text);
}

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(n) + ": expected key=value");
    std::string key = trim(std::string_view(t).substr(0, eq));
    std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(n) + ": empty key");
    if (!out.emplace(key, value).second) throw ConfigError("key '" + key + "' given twice");
  }
  return out;
}

ExperimentConfig parse_config(std::string_view text) { return validate_config(parse_key_values(text)); }

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::vector<std::pair<std::string, std::string>> config_keys(std::string_view process) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : schema()) {
    if (applies(k, std::string(process))) out.emplace_back(k.name, k.def);
  }
  return out;
}

}  // namespace latgrow

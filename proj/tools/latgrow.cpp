#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "latgrow/config.hpp"
#include "latgrow/experiment.hpp"

using namespace latgrow;

namespace {

struct FlagKey {
  std::string flag;
  std::string key;
  std::string help;
};

// Process-specific flags; each maps onto one config key.
const std::map<std::string, std::vector<FlagKey>>& process_flags() {
  static const std::map<std::string, std::vector<FlagKey>> m{
      {"fpp", {{"--rate", "rate", "edge rate"}, {"--delta", "delta", "fluctuation tolerance"}}},
      {"compete",
       {{"--lambda", "lambda", "type-2 rate"},
        {"--r", "r", "type-2 ball radius"},
        {"--alpha", "alpha", "type-1 distance factor"},
        {"--c-hat", "c_hat", "ball surrogate constant (default: estimated)"},
        {"--placement", "placement", "axis | random_boundary"}}},
      {"fpphe",
       {{"--p", "p", "seed density"}, {"--lambda", "lambda", "type-2 rate"}, {"--seed-rule", "seed_rule", "absorb | block"}}},
      {"fpphe-det",
       {{"--p", "p", "seed density"},
        {"--lambda", "lambda", "type-2 speed as n/d"},
        {"--seed-rule", "seed_rule", "absorb | block"}}},
      {"mdla", {{"--mu", "mu", "particle density"}}},
      {"schedule",
       {{"--epsilon", "epsilon", "total rate slack"},
        {"--lambda", "lambda", "type-2 rate"},
        {"--alpha", "alpha", "encapsulation distance factor"},
        {"--c1", "c1", "encapsulation constant"},
        {"--c-fpp", "c_fpp", "lower shape constant"},
        {"--c-fpp-prime", "c_fpp_prime", "upper shape constant"},
        {"--L1", "L1", "first scale length"},
        {"--k-max", "k_max", "number of scales"},
        {"--a", "a", "ledger target exponent"},
        {"--c-rec", "c_rec", "recursion constant"},
        {"--rho-bar", "rho_bar", "scale-1 bad probability"},
        {"--c-q", "c_q", "q_k constant"}}},
      {"sweep",
       {{"--p-grid", "p_grid", "comma-separated p values"},
        {"--lambda-grid", "lambda_grid", "comma-separated lambda values"},
        {"--seed-rule", "seed_rule", "absorb | block"}}},
  };
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latgrow: lattice growth simulators"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_file;
  std::vector<std::string> sets;
  struct G {
    std::string flag, key, help;
  };
  const std::vector<G> globals{{"--seed", "seed", "master seed"},
                               {"--window", "window", "window radius W"},
                               {"--tmax", "t_max", "time horizon"},
                               {"--reps", "reps", "number of repetitions"},
                               {"--out", "out", "output directory"},
                               {"--snapshot-times", "snapshot_times", "comma-separated snapshot times"},
                               {"--threads", "threads", "worker threads (env LATGROW_THREADS)"},
                               {"--dim", "dim", "lattice dimension"},
                               {"--margin", "margin", "margin width"}};
  std::map<std::string, std::string> global_values;
  for (const auto& g : globals) {
    app.add_option(g.flag, global_values[g.key], g.help);
  }
  app.add_option("--config", config_file, "key=value config file")->check(CLI::ExistingFile);
  app.add_option("--set", sets, "extra key=value (repeatable)");

  std::map<std::string, std::map<std::string, std::string>> sub_values;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, flags] : process_flags()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " process");
    for (const auto& f : flags) sub->add_option(f.flag, sub_values[name][f.key], f.help);
    subs[name] = sub;
  }
  std::string construction = "direct";
  subs["mdla"]->add_option("--construction", construction, "direct | holes")->check(CLI::IsMember({"direct", "holes"}));
  std::string preset_name;
  auto* preset_cmd = app.add_subcommand("preset", "run a figure preset");
  preset_cmd->add_option("name", preset_name, "fig1..fig6")->required();
  auto* run_cmd = app.add_subcommand("run", "run the process named in --config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    std::map<std::string, std::string> raw;
    if (!config_file.empty()) {
      std::ifstream f(config_file);
      std::stringstream ss;
      ss << f.rdbuf();
      raw = parse_key_values(ss.str());
    }
    for (const auto& [k, v] : global_values) {
      if (!v.empty()) raw[k] = v;
    }
    for (const auto& s : sets) {
      auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
      raw[s.substr(0, eq)] = s.substr(eq + 1);
    }

    if (preset_cmd->parsed()) {
      int worst = kExitOk;
      for (const auto& run : preset(preset_name, raw)) {
        std::cerr << "preset " << preset_name << "/" << run.name << " config_hash=" << run.config.hash() << "\n";
        worst = std::max(worst, run_experiment(run.config, std::cerr));
      }
      return worst;
    }

    std::string process;
    for (const auto& [name, sub] : subs) {
      if (!sub->parsed()) continue;
      process = name == "mdla" ? "mdla-" + construction : name;
      for (const auto& [k, v] : sub_values[name]) {
        if (!v.empty()) raw[k] = v;
      }
    }
    if (run_cmd->parsed()) {
      if (!raw.count("process")) throw ConfigError("run needs a config with a 'process' key");
    } else {
      if (raw.count("process") && raw["process"] != process) {
        throw ConfigError("config process '" + raw["process"] + "' contradicts subcommand " + process);
      }
      raw["process"] = process;
    }
    ExperimentConfig cfg = validate_config(raw);
    std::cerr << cfg.process() << " config_hash=" << cfg.hash() << "\n";
    return run_experiment(cfg, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

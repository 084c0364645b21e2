#include "latgrow/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

#include "latgrow/competing.hpp"
#include "latgrow/fpp.hpp"
#include "latgrow/fpphe.hpp"
#include "latgrow/fpphe_det.hpp"
#include "latgrow/mdla.hpp"
#include "latgrow/multiscale.hpp"
#include "latgrow/parallel.hpp"
#include "latgrow/raster.hpp"

namespace latgrow {

namespace fs = std::filesystem;

namespace {

struct Ctx {
  const ExperimentConfig& cfg;
  std::ostream& log;
  Provenance prov;
  fs::path out;
  Window window;
  std::size_t reps;
  std::uint64_t seed;
  std::int64_t margin;
  unsigned threads;
};

std::string real_or_empty(double v) { return std::isfinite(v) ? format_real(v) : ""; }

void write_csv(const Ctx& c, const std::string& name, const CsvTable& t) {
  write_file(c.out / name, t.str(&c.prov));
}

std::string time_tag(double t) {
  std::string s = format_real(t);
  for (char& ch : s) {
    if (ch == '.') ch = 'p';
  }
  return s;
}

// Snapshots at the requested times, or the final state when none are given.
void snapshots(const Ctx& c, const SiteGrid& grid, const std::string& stem, double t_end, bool type_label,
               const std::vector<std::uint8_t>& seed_mask = {}) {
  auto times = c.cfg.reals("snapshot_times");
  bool final_only = times.empty();
  if (final_only) times.push_back(t_end);
  nlohmann::json legend;
  for (double t : times) {
    std::string tag = final_only ? "final" : "t" + time_tag(t);
    RasterOptions opt;
    opt.t = t;
    opt.t_ref = t_end;
    opt.style = RasterStyle::epoch;
    auto r = rasterize(grid, opt);
    write_ppm(c.out / (stem + "_epoch_" + tag + ".ppm"), r, c.prov.line());
    legend["epoch"] = r.legend;
    if (type_label) {
      opt.style = RasterStyle::type_label;
      opt.seed_mask = seed_mask;
      auto rl = rasterize(grid, opt);
      write_ppm(c.out / (stem + "_label_" + tag + ".ppm"), rl, c.prov.line());
      legend["type_label"] = rl.legend;
    }
  }
  write_json(c.out / (stem + "_legend.json"), legend, c.prov);
}

void run_fpp(const Ctx& c) {
  const double rate = c.cfg.real("rate");
  const double t = c.cfg.real("t_max");
  const auto dirs = shape_directions(c.window.dim());
  std::vector<std::string> header{"time"};
  for (const auto& x : dirs) {
    std::string name = "r";
    for (int i = 0; i < x.dim(); ++i) name += "_" + std::string(x[i] < 0 ? "m" : "") + std::to_string(std::abs(x[i]));
    header.push_back(name);
  }
  std::vector<std::string> csvs(c.reps);
  std::vector<std::optional<SiteGrid>> first(1);
  parallel_for(c.reps, c.threads, [&](std::size_t rep) {
    RngStream stream(c.seed, rep, "fpp.run");
    PassageField field = draw_passage_field(rate, c.window, stream);
    const SiteIndex origin = c.window.origin();
    ArrivalMap map = arrival_times(std::span(&origin, 1), field, t);
    CsvTable table(header);
    for (double cp : geometric_checkpoints(t)) {
      std::vector<std::string> row{format_real(cp)};
      for (auto r : directional_radii(map, cp)) row.push_back(std::to_string(r));
      table.add_row(row);
    }
    csvs[rep] = table.str(&c.prov);
    if (rep == 0) {
      SiteGrid g(c.window);
      for (SiteIndex s = 0; s < c.window.size(); ++s) {
        double a = map.at(s);
        if (a <= t) g.occupy(s, SiteLabel::type1, a);
      }
      first[0] = std::move(g);
    }
  });
  for (std::size_t rep = 0; rep < c.reps; ++rep) write_file(c.out / ("radii_rep" + std::to_string(rep) + ".csv"), csvs[rep]);

  ShapeEstimate shape = estimate_shape(rate, c.window, t, c.reps, c.seed, c.margin, c.threads);
  write_json(c.out / "shape.json", shape.to_json(), c.prov);
  if (c.cfg.has("delta")) {
    auto f = fluctuation_frequency(t, c.cfg.real("delta"), rate, c.reps, c.window, c.seed, &shape, c.margin, c.threads);
    write_json(c.out / "fluctuation.json",
               nlohmann::json{{"t", t}, {"delta", c.cfg.real("delta")}, {"frequency", f.frequency.estimate},
                {"wilson_lo", f.frequency.lo}, {"wilson_hi", f.frequency.hi}, {"runs", f.frequency.trials}, {"discarded", f.discarded}},
               c.prov);
  }
  if (first[0]) snapshots(c, *first[0], "fpp_rep0", t, false);
}

void run_compete(const Ctx& c) {
  EncapsulationParams p;
  p.r = c.cfg.real("r");
  p.alpha = c.cfg.real("alpha");
  p.lambda = c.cfg.real("lambda");
  p.placement = c.cfg.text("placement") == "axis" ? Placement::axis : Placement::random_boundary;
  p.margin = c.margin;
  p.t_max = c.cfg.real("t_max");
  double c_prime = 0.0;
  nlohmann::json shape_json = nullptr;
  if (c.cfg.has("c_hat")) {
    p.c_hat = c.cfg.real("c_hat");
    c_prime = p.c_hat;
  } else {
    // pilot shape estimate for the ball surrogate
    ShapeEstimate shape = estimate_shape(1.0, Window(c.window.dim(), 60), 10.0, 20, c.seed, 10, c.threads);
    p.c_hat = shape.c_hat;
    c_prime = shape.c_prime_hat;
    shape_json = shape.to_json();
  }
  auto report = encapsulation_experiment(p, c.reps, c.window, c.seed, c.threads);
  CsvTable t({"rep", "success", "surround_time", "confinement_radius", "stop_reason"});
  for (std::size_t i = 0; i < report.outcomes.size(); ++i) {
    const auto& o = report.outcomes[i];
    t.add_row({std::to_string(i), o.success ? "1" : "0", real_or_empty(o.surround_time),
               std::to_string(o.confinement_radius), std::string(stop_reason_name(o.stop))});
  }
  write_csv(c, "encapsulation.csv", t);
  nlohmann::json summary = report.to_json();
  summary["c_hat"] = p.c_hat;
  summary["shape_estimate"] = shape_json;
  write_json(c.out / "summary.json", summary, c.prov);

  auto sched = annulus_schedule(p.r, p.alpha, p.lambda, c.window.dim(), p.c_hat, c_prime);
  CsvTable a({"n", "t_n", "T_n", "radius"});
  for (const auto& s : sched.steps) {
    a.add_row({std::to_string(s.n), format_real(s.t_n), format_real(s.T_n), format_real(s.radius)});
  }
  write_csv(c, "annulus.csv", a);

  SiteGrid grid(c.window);
  RngStream stream(c.seed, 0, "compete.encapsulation");
  encapsulation_run(p, c.window, stream, nullptr, &grid);
  double t_end = 0.0;
  for (double x : grid.times()) {
    if (std::isfinite(x)) t_end = std::max(t_end, x);
  }
  snapshots(c, grid, "compete_rep0", t_end, true);
}

FppheConfig fpphe_config(const Ctx& c, double p, double lambda) {
  FppheConfig f(c.window);
  f.p = p;
  f.lambda = lambda;
  f.t_max = c.cfg.real("t_max");
  f.margin = c.margin;
  f.seed_rule = c.cfg.text("seed_rule") == "block" ? SeedRule::block : SeedRule::absorb;
  f.validate();
  return f;
}

CsvTable phase_table() {
  return CsvTable({"p", "lambda", "reps", "survived", "extinct", "undecided", "mean_speed", "survival",
                   "survival_lo", "survival_hi", "mean_extinction_time"});
}

void add_phase_row(CsvTable& t, const PhaseRow& r) {
  t.add_row({format_real(r.p), format_real(r.lambda), std::to_string(r.reps), std::to_string(r.survived),
             std::to_string(r.extinct), std::to_string(r.undecided), real_or_empty(r.mean_speed),
             format_real(r.survival.estimate), format_real(r.survival.lo), format_real(r.survival.hi),
             real_or_empty(r.mean_extinction_time)});
}

void run_fpphe_process(const Ctx& c) {
  FppheConfig f = fpphe_config(c, c.cfg.real("p"), c.cfg.real("lambda"));
  std::vector<OutcomeRecord> outcomes(c.reps);
  std::vector<std::optional<FppheRun>> first(1);
  parallel_for(c.reps, c.threads, [&](std::size_t i) {
    RngStream stream(c.seed, i, "fpphe");
    FppheRun run = run_fpphe(f, stream);
    outcomes[i] = run.outcome;
    if (i == 0) first[0] = std::move(run);
  });
  std::string lines;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    nlohmann::json j = outcomes[i].to_json();
    j["rep"] = i;
    lines += j.dump() + "\n";
  }
  write_file(c.out / "outcomes.jsonl", "# " + c.prov.line() + "\n" + lines);
  CsvTable t = phase_table();
  add_phase_row(t, summarize_outcomes(f.p, f.lambda, outcomes, c.window, c.margin));
  write_csv(c, "phase.csv", t);

  const FppheRun& run = *first[0];
  CsvTable prof({"t", "max_radius", "inscribed_radius"});
  for (const auto& pt : speed_profile(run.grid, run.stop_time)) {
    prof.add_row({format_real(pt.t), std::to_string(pt.max_radius), std::to_string(pt.inscribed_radius)});
  }
  write_csv(c, "profile_rep0.csv", prof);
  std::vector<std::uint8_t> seeds(static_cast<std::size_t>(c.window.size()), 0);
  for (SiteIndex s : run.seeds) seeds[static_cast<std::size_t>(s)] = 1;
  snapshots(c, run.grid, "fpphe_rep0", run.stop_time, true, seeds);
}

void run_sweep(const Ctx& c) {
  FppheConfig f = fpphe_config(c, 0.0, 0.5);
  auto rows = sweep(c.cfg.reals("p_grid"), c.cfg.reals("lambda_grid"), c.reps, c.window, f.t_max, c.seed,
                    c.margin, f.seed_rule, c.threads);
  CsvTable t = phase_table();
  for (const auto& r : rows) add_phase_row(t, r);
  write_csv(c, "phase.csv", t);
}

void run_det(const Ctx& c) {
  DetConfig d(c.window);
  d.p = c.cfg.real("p");
  d.lambda = c.cfg.rational("lambda");
  d.t_max = c.cfg.rational("t_max");
  d.margin = c.margin;
  d.margin_policy = MarginPolicy::confine;
  d.seed_rule = c.cfg.text("seed_rule") == "block" ? SeedRule::block : SeedRule::absorb;
  d.validate();
  std::vector<CoexistenceRow> rows(c.reps);
  std::vector<std::optional<DetState>> first(1);
  parallel_for(c.reps, c.threads, [&](std::size_t i) {
    RngStream stream(c.seed, i, "fpphe_det.coexistence");
    DetState st = run_deterministic(d, stream);
    auto t1 = eta1_margin_tick(st, c.margin);
    auto t2 = eta2_spanning_tick(st, c.margin);
    rows[i].rep = i;
    rows[i].eta1_margin = t1.has_value();
    rows[i].eta2_margin = t2.has_value();
    if (t1 && t2) rows[i].first_joint_time = RationalTime(std::max(*t1, *t2), st.ticks_per_unit);
    if (i == 0) first[0] = std::move(st);
  });
  CsvTable t({"rep", "eta1_margin", "eta2_margin", "first_joint_time"});
  for (const auto& r : rows) {
    t.add_row({std::to_string(r.rep), r.eta1_margin ? "1" : "0", r.eta2_margin ? "1" : "0",
               r.first_joint_time ? r.first_joint_time->str() : ""});
  }
  write_csv(c, "coexistence.csv", t);

  const DetState& st = *first[0];
  if (c.window.dim() == 2) {
    auto prof = axis_profile(st, 0);
    CsvTable pt({"k", "X_k", "Y_k"});
    for (std::size_t k = 0; k < prof.X.size(); ++k) {
      pt.add_row({std::to_string(k), std::to_string(prof.X[k]), std::to_string(prof.Y[k])});
    }
    write_csv(c, "profile_rep0.csv", pt);
  }
  std::vector<std::uint8_t> seeds(st.open.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = st.open[i] ? 0 : 1;
  snapshots(c, to_site_grid(st), "det_rep0", st.stop_time().to_double(), true, seeds);
}

void run_mdla(const Ctx& c, bool holes) {
  MdlaConfig m(c.window);
  m.mu = c.cfg.real("mu");
  m.t_max = c.cfg.real("t_max");
  m.margin = c.margin;
  m.validate();
  const auto cps = geometric_checkpoints(m.t_max);
  std::vector<GrowthMetrics> metrics(c.reps);
  std::vector<std::optional<MdlaRun>> first(1);
  parallel_for(c.reps, c.threads, [&](std::size_t i) {
    RngStream stream(c.seed, i, holes ? "mdla.holes" : "mdla.direct");
    MdlaRun run = holes ? run_holes(m, stream) : run_direct(m, stream);
    metrics[i] = fill_metrics(run, cps);
    if (i == 0) first[0] = std::move(run);
  });
  nlohmann::json fits = nlohmann::json::array();
  std::vector<double> slopes;
  for (std::size_t i = 0; i < c.reps; ++i) {
    CsvTable t({"t", "F_linf", "F_l2", "inscribed_radius", "particles_remaining"});
    for (const auto& row : metrics[i].series.rows) {
      t.add_row({format_real(row[0]), format_real(row[1]), format_real(row[2]), format_real(row[3]),
                 real_or_empty(row[4])});
    }
    write_csv(c, "metrics_rep" + std::to_string(i) + ".csv", t);
    nlohmann::json j = metrics[i].to_json();
    j.erase("rows");
    j.erase("columns");
    j["rep"] = i;
    fits.push_back(j);
    if (metrics[i].front_fit) slopes.push_back(metrics[i].front_fit->slope);
  }
  nlohmann::json summary{{"runs", fits}, {"fitted_runs", slopes.size()}};
  summary["mean_front_slope"] = slopes.empty() ? nlohmann::json(nullptr) : nlohmann::json(stats::mean(slopes));
  write_json(c.out / "fits.json", summary, c.prov);
  snapshots(c, first[0]->grid(), holes ? "mdla_holes_rep0" : "mdla_direct_rep0", first[0]->stop_time, false);
}

void run_schedule(const Ctx& c) {
  ScaleParams p;
  p.epsilon = c.cfg.real("epsilon");
  p.lambda = c.cfg.real("lambda");
  p.alpha = c.cfg.real("alpha");
  p.c1 = c.cfg.real("c1");
  p.c_fpp = c.cfg.real("c_fpp");
  p.c_fpp_prime = c.cfg.real("c_fpp_prime");
  p.L1 = c.cfg.real("L1");
  p.d = c.window.dim();
  p.k_max = static_cast<int>(c.cfg.integer("k_max"));
  auto s = build_schedule(p);
  auto v = verify_schedule(s);
  const double a = c.cfg.real("a"), c_rec = c.cfg.real("c_rec"), rho = c.cfg.real("rho_bar"),
               c_q = c.cfg.real("c_q");
  auto led = rho_ledger(a, c_rec, rho, s, c_q);
  write_file(c.out / "schedule.csv", "# " + c.prov.line() + "\r\n" + schedule_csv(s, led));
  nlohmann::json vj = v.to_json();
  vj["surrogate"] = s.surrogate;
  write_json(c.out / "verification.json", vj, c.prov);
  write_json(c.out / "ledger.json", led.to_json(), c.prov);
  nlohmann::json sens = nlohmann::json::array();
  for (const auto& r : sensitivity(p, a, c_rec, rho, c_q)) {
    sens.push_back({{"constant", r.constant}, {"factor", r.factor}, {"schedule_pass", r.schedule_pass},
                    {"first_exceed", r.first_exceed ? nlohmann::json(*r.first_exceed) : nlohmann::json(nullptr)}});
  }
  write_json(c.out / "sensitivity.json", {{"rows", sens}}, c.prov);
  if (!v.pass) {
    c.log << "schedule verification failed at k=" << v.failures.front().k << ": " << v.failures.front().inequality
          << "\n";
  }
}

}  // namespace

Provenance provenance_for(const ExperimentConfig& cfg) {
  Provenance p;
  p.config_hash = cfg.hash();
  p.version = version();
  const std::string proc = cfg.process();
  p.switches["process"] = proc;
  if (cfg.has("seed_rule")) p.switches["seed_rule"] = cfg.text("seed_rule");
  if (cfg.has("placement")) p.switches["placement"] = cfg.text("placement");
  if (proc == "mdla-direct" || proc == "mdla-holes") {
    p.switches["boundary"] = "reflecting";
    p.switches["clock"] = "jump_rate_1";
  } else if (proc != "schedule") {
    p.switches["boundary"] = proc == "fpphe-det" || proc == "compete" ? "margin_confine" : "margin_stop";
  }
  if (proc == "fpphe-det") p.switches["tie_rule"] = "coin";
  return p;
}

void execute_experiment(const ExperimentConfig& cfg, std::ostream& log) {
  const auto reps = static_cast<std::size_t>(cfg.integer("reps"));
  if (reps == 0) {
    log << "reps=0: nothing to do\n";
    return;
  }
  const std::string proc = cfg.process();
  Ctx c{cfg,
        log,
        provenance_for(cfg),
        fs::path(cfg.text("out")),
        Window(static_cast<int>(cfg.integer("dim")), cfg.integer("window")),
        reps,
        static_cast<std::uint64_t>(cfg.integer("seed")),
        cfg.integer("margin"),
        cfg.has("threads") ? static_cast<unsigned>(cfg.integer("threads")) : default_threads()};
  write_file(c.out / "config.txt", "# " + c.prov.line() + "\n" + cfg.emit());
  if (proc == "fpp") {
    run_fpp(c);
  } else if (proc == "compete") {
    run_compete(c);
  } else if (proc == "fpphe") {
    run_fpphe_process(c);
  } else if (proc == "fpphe-det") {
    run_det(c);
  } else if (proc == "mdla-direct" || proc == "mdla-holes") {
    run_mdla(c, proc == "mdla-holes");
  } else if (proc == "schedule") {
    run_schedule(c);
  } else if (proc == "sweep") {
    run_sweep(c);
  }
  log << proc << ": wrote " << c.out.string() << "\n";
}

int run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
  try {
    execute_experiment(cfg, log);
    return kExitOk;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvariantError& e) {
    log << "invariant breach: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const IoError& e) {
    log << "output error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    log << "output error: " << e.what() << "\n";
    return kExitIo;
  }
}

std::vector<std::string> preset_names() { return {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6"}; }

std::vector<PresetRun> preset(const std::string& name, const std::map<std::string, std::string>& overrides) {
  using KV = std::map<std::string, std::string>;
  std::vector<std::pair<std::string, KV>> variants;
  if (name == "fig1") {
    for (const char* mu : {"0.1", "0.3"}) {
      variants.push_back({std::string("mu") + mu, {{"process", "mdla-direct"}, {"mu", mu}, {"window", "150"},
                                                   {"t_max", "3000"}}});
    }
  } else if (name == "fig2") {
    variants.push_back({"mu0.2", {{"process", "mdla-direct"}, {"mu", "0.2"}, {"window", "250"}, {"t_max", "5000"}}});
  } else if (name == "fig3") {
    for (const char* p : {"0.030", "0.029", "0.027"}) {
      variants.push_back({std::string("p") + p, {{"process", "fpphe"}, {"p", p}, {"lambda", "0.7"}, {"window", "600"}}});
    }
  } else if (name == "fig4") {
    for (const char* l : {"9/10", "8/10", "7/10"}) {
      std::string tag = std::string("lambda") + l;
      tag.replace(tag.find('/'), 1, "_");
      variants.push_back({tag, {{"process", "fpphe-det"}, {"p", "0.2"}, {"lambda", l}, {"window", "200"}}});
    }
  } else if (name == "fig5") {
    for (const char* l : {"9/10", "8/10"}) {
      std::string tag = std::string("lambda") + l;
      tag.replace(tag.find('/'), 1, "_");
      variants.push_back({tag, {{"process", "fpphe-det"}, {"p", "0.2"}, {"lambda", l}, {"window", "60"}}});
    }
  } else if (name == "fig6") {
    variants.push_back({"lambda59_100", {{"process", "fpphe-det"}, {"p", "0.05"}, {"lambda", "59/100"},
                                         {"window", "30"}, {"snapshot_times", "4,8,12,16,20"}}});
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  std::vector<PresetRun> out;
  for (auto& [tag, kv] : variants) {
    std::string base = "latgrow-out/" + name;
    for (const auto& [k, v] : overrides) {
      if (k == "out") {
        base = v;
      } else if (k != "process") {
        kv[k] = v;
      }
    }
    kv["out"] = base + "/" + tag;
    out.push_back({tag, validate_config(kv)});
  }
  return out;
}

}  // namespace latgrow

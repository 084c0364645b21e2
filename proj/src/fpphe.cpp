#include "latgrow/fpphe.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "latgrow/parallel.hpp"

namespace latgrow {

void FppheConfig::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0,1]");
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("lambda must lie in (0,1)");
  if (!(t_max >= 0.0)) throw DomainError("t_max must be nonnegative");
  if (margin < 0 || margin >= window.radius()) throw DomainError("margin must be in [0, W)");
}

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::extinct: return "extinct";
    case Outcome::survived_to_boundary: return "survived_to_boundary";
    case Outcome::undecided: return "undecided";
  }
  return "?";
}

nlohmann::json OutcomeRecord::to_json() const {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json j;
  j["classification"] = std::string(outcome_name(classification));
  j["extinction_time"] = num(extinction_time);
  j["boundary_time"] = num(boundary_time);
  j["eta1"] = eta1;
  j["eta2"] = eta2;
  return j;
}

OutcomeRecord classify(const SiteGrid& grid, std::int64_t margin) {
  const Window& w = grid.window();
  OutcomeRecord out;
  const std::int64_t reach = w.radius() - margin;
  bool blocked = true;
  double last = 0.0;
  for (SiteIndex s = 0; s < w.size(); ++s) {
    const SiteLabel l = grid.label(s);
    if (l == SiteLabel::type2) ++out.eta2;
    if (l != SiteLabel::type1) continue;
    ++out.eta1;
    last = std::max(last, grid.occupied_at(s));
    if (w.linf_radius(s) >= reach) out.boundary_time = std::min(out.boundary_time, grid.occupied_at(s));
    for (int k = 0; k < w.directions(); ++k) {
      SiteIndex v = w.step(s, k);
      if (v == kNoSite) continue;
      const SiteLabel lv = grid.label(v);
      if (lv != SiteLabel::type1 && lv != SiteLabel::type2) blocked = false;
    }
  }
  if (std::isfinite(out.boundary_time)) {
    out.classification = Outcome::survived_to_boundary;
  } else if (blocked && out.eta1 > 0) {
    out.classification = Outcome::extinct;
    out.extinction_time = last;
  }
  return out;
}

FppheRun run_fpphe(const FppheConfig& config, const SiteSet& seeds, RngStream& clock_stream) {
  config.validate();
  const Window& w = config.window;
  if (!(seeds.window() == w)) throw DomainError("seed set window mismatch");
  if (seeds.contains(w.origin())) throw DomainError("origin must not hold a seed");
  GrowthSetup setup(w);
  setup.type1_init = {w.origin()};
  setup.seeds = seeds.indices();
  setup.rate1 = 1.0;
  setup.rate2 = config.lambda;
  setup.seed_rule = config.seed_rule;
  setup.t_max = config.t_max;
  setup.margin = config.margin;
  setup.stop_when_type1_blocked = true;
  setup.keep_log = true;
  TwoTypeGrowth g(setup, clock_stream);
  g.run();

  FppheRun run{g.grid(), setup.seeds, {}, {}, g.type1_firings_into_seeds(), g.time(), {}, {}};
  for (const GrowthEvent& e : g.log()) {
    if (e.kind == GrowthEventKind::activate) run.activations.emplace_back(e.site, e.time);
  }
  if (config.keep_log) run.log = g.log();
  if (run.activations.size() != g.activations() || g.activations() > g.type1_firings_into_seeds()) {
    throw InvariantError("activation count mismatch");
  }
  run.outcome = classify(run.grid, config.margin);

  RunRecord& rec = run.record;
  rec.process = "fpphe";
  rec.master_seed = clock_stream.master_seed();
  rec.run_id = clock_stream.run_id();
  rec.dim = w.dim();
  rec.window_radius = w.radius();
  rec.margin = config.margin;
  rec.set("p", std::to_string(config.p));
  rec.set("lambda", std::to_string(config.lambda));
  rec.set("t_max", std::to_string(config.t_max));
  rec.set("seed_rule", config.seed_rule == SeedRule::absorb ? "absorb" : "block");
  rec.stop = g.stop_reason();
  rec.stop_time = g.time();
  rec.notes.emplace_back(std::string("outcome=") + std::string(outcome_name(run.outcome.classification)));
  return run;
}

FppheRun run_fpphe(const FppheConfig& config, RngStream& stream) {
  config.validate();
  RngStream seed_stream = stream.derive("seeds");
  SiteSet seeds = sample_bernoulli_field(config.p, config.window, true, seed_stream);
  RngStream clocks = stream.derive("clocks");
  return run_fpphe(config, seeds, clocks);
}

std::vector<double> geometric_checkpoints(double until) {
  std::vector<double> out;
  for (int k = 0;; ++k) {
    double t = std::exp2(k / 4.0);
    if (t > until) break;
    out.push_back(t);
  }
  return out;
}

std::vector<ProfilePoint> speed_profile(const SiteGrid& grid, double until) {
  const Window& w = grid.window();
  std::vector<ProfilePoint> out;
  for (double t : geometric_checkpoints(until)) {
    auto mask = grid.occupied_mask(SiteLabel::type1, t);
    ProfilePoint pt{t, -1, -1};
    for (SiteIndex s = 0; s < w.size(); ++s) {
      if (mask[static_cast<std::size_t>(s)]) pt.max_radius = std::max(pt.max_radius, w.linf_radius(s));
    }
    Box box;
    if (bounding_box(mask, w, box)) {
      auto enc = enclosed_mask(mask, w, box);
      pt.inscribed_radius = inscribed_linf_radius(enc, w);
    }
    out.push_back(pt);
  }
  return out;
}

PhaseRow summarize_outcomes(double p, double lambda, const std::vector<OutcomeRecord>& outcomes,
                            const Window& window, std::int64_t margin) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  PhaseRow row;
  row.p = p;
  row.lambda = lambda;
  row.reps = outcomes.size();
  std::vector<double> ext_times;
  std::vector<double> speeds;
  for (const auto& o : outcomes) {
    switch (o.classification) {
      case Outcome::survived_to_boundary:
        ++row.survived;
        speeds.push_back(static_cast<double>(window.radius() - margin) / o.boundary_time);
        break;
      case Outcome::extinct:
        ++row.extinct;
        ext_times.push_back(o.extinction_time);
        break;
      case Outcome::undecided: ++row.undecided; break;
    }
  }
  row.survival = stats::wilson(row.survived, row.reps);
  row.mean_extinction_time = ext_times.empty() ? nan : stats::mean(ext_times);
  row.mean_speed = speeds.empty() ? nan : stats::mean(speeds);
  return row;
}

std::vector<PhaseRow> sweep(const std::vector<double>& p_grid, const std::vector<double>& lambda_grid,
                            std::size_t reps, const Window& window, double t_max,
                            std::uint64_t master_seed, std::int64_t margin, SeedRule rule,
                            unsigned threads) {
  if (p_grid.empty() || lambda_grid.empty()) throw DomainError("sweep grids must be nonempty");
  std::vector<PhaseRow> rows;
  for (double lambda : lambda_grid) {
    for (double p : p_grid) {
      FppheConfig cfg(window);
      cfg.p = p;
      cfg.lambda = lambda;
      cfg.t_max = t_max;
      cfg.margin = margin;
      cfg.seed_rule = rule;
      cfg.validate();
      std::vector<OutcomeRecord> outcomes(reps);
      parallel_for(reps, threads, [&](std::size_t i) {
        RngStream stream(master_seed, i, "fpphe");
        outcomes[i] = run_fpphe(cfg, stream).outcome;
      });
      rows.push_back(summarize_outcomes(p, lambda, outcomes, window, margin));
    }
  }
  return rows;
}

}  // namespace latgrow

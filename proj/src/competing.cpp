#include "latgrow/competing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "latgrow/fpp.hpp"
#include "latgrow/growth.hpp"
#include "latgrow/parallel.hpp"

namespace latgrow {

void CompetingConfig::validate() const {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in (0,1]");
  if (xi1_init.empty()) throw DomainError("xi1(0) must be nonempty");
  if (margin < 0 || margin >= window.radius()) throw DomainError("margin must be in [0, W)");
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(window.size()), 0);
  for (const auto* set : {&xi1_init, &xi2_init}) {
    for (SiteIndex s : *set) {
      if (s < 0 || s >= window.size()) throw DomainError("initial site outside window");
      if (seen[static_cast<std::size_t>(s)]++ != 0) throw DomainError("initial sets overlap");
    }
  }
}

namespace {

RunRecord base_record(const CompetingConfig& c, const char* process, const RngStream* stream) {
  RunRecord rec;
  rec.process = process;
  if (stream != nullptr) {
    rec.master_seed = stream->master_seed();
    rec.run_id = stream->run_id();
  }
  rec.dim = c.window.dim();
  rec.window_radius = c.window.radius();
  rec.margin = c.margin;
  rec.set("lambda", std::to_string(c.lambda));
  rec.set("xi1_init", std::to_string(c.xi1_init.size()));
  rec.set("xi2_init", std::to_string(c.xi2_init.size()));
  return rec;
}

}  // namespace

CompetingRun run_interacting(const CompetingConfig& config, double t_max, RngStream& stream,
                             const PassageField* clocks1, const PassageField* clocks2) {
  config.validate();
  GrowthSetup setup(config.window);
  setup.type1_init = config.xi1_init;
  setup.type2_init = config.xi2_init;
  setup.rate1 = 1.0;
  setup.rate2 = config.lambda;
  setup.t_max = t_max;
  setup.margin = config.margin;
  setup.clock1 = clocks1;
  setup.clock2 = clocks2;
  TwoTypeGrowth g(std::move(setup), stream);
  g.run();
  RunRecord rec = base_record(config, "compete.interacting", &stream);
  rec.stop = g.stop_reason();
  rec.stop_time = g.time();
  return {g.grid(), std::move(rec)};
}

CompetingRun run_static_field(const CompetingConfig& config, double t_max, const PassageField& zeta1,
                              const PassageField& zeta2) {
  config.validate();
  const Window& w = config.window;
  if (!(zeta1.window() == w) || !(zeta2.window() == w)) throw DomainError("field window mismatch");
  ArrivalMap t1 = arrival_times(std::span<const SiteIndex>(config.xi1_init), zeta1);
  std::vector<double> t2(static_cast<std::size_t>(w.size()), kNever);
  if (!config.xi2_init.empty()) t2 = arrival_times(std::span<const SiteIndex>(config.xi2_init), zeta2).time;

  // the run ends when either type would first enter the margin ring
  const std::int64_t reach = w.radius() - config.margin;
  double contact = kNever;
  for (SiteIndex s = 0; s < w.size(); ++s) {
    if (w.linf_radius(s) >= reach) contact = std::min({contact, t1.at(s), t2[static_cast<std::size_t>(s)]});
  }
  const double horizon = std::min(t_max, contact);

  SiteGrid grid(w);
  for (SiteIndex s = 0; s < w.size(); ++s) {
    const double a = t1.at(s);
    const double b = t2[static_cast<std::size_t>(s)];
    if (a <= b && a <= horizon) {
      grid.occupy(s, SiteLabel::type1, a);
    } else if (b < a && b <= horizon) {
      grid.occupy(s, SiteLabel::type2, b);
    }
  }
  RunRecord rec = base_record(config, "compete.static_field", nullptr);
  rec.stop = contact <= t_max ? StopReason::margin : StopReason::t_max;
  rec.stop_time = horizon;
  return {std::move(grid), std::move(rec)};
}

CompetingRun run_static_field(const CompetingConfig& config, double t_max, RngStream& stream) {
  config.validate();
  RngStream s1 = stream.derive("zeta1");
  RngStream s2 = stream.derive("zeta2");
  PassageField z1 = PassageField::draw(1.0, config.window, s1);
  PassageField z2 = PassageField::draw(config.lambda, config.window, s2);
  CompetingRun run = run_static_field(config, t_max, z1, z2);
  run.record.master_seed = stream.master_seed();
  run.record.run_id = stream.run_id();
  return run;
}

double mode_disagreement(const CompetingConfig& config, double t_max, RngStream& stream) {
  config.validate();
  RngStream s1 = stream.derive("zeta1");
  RngStream s2 = stream.derive("zeta2");
  PassageField z1 = PassageField::draw(1.0, config.window, s1);
  PassageField z2 = PassageField::draw(config.lambda, config.window, s2);
  RngStream unused = stream.derive("unused");
  CompetingRun a = run_interacting(config, t_max, unused, &z1, &z2);
  CompetingRun b = run_static_field(config, t_max, z1, z2);
  const double t = std::min(a.record.stop_time, b.record.stop_time);
  const Window& w = config.window;
  std::size_t differ = 0;
  for (SiteIndex s = 0; s < w.size(); ++s) {
    SiteLabel la = a.grid.occupied_at(s) <= t ? a.grid.label(s) : SiteLabel::empty;
    SiteLabel lb = b.grid.occupied_at(s) <= t ? b.grid.label(s) : SiteLabel::empty;
    if (la != lb) ++differ;
  }
  return static_cast<double>(differ) / static_cast<double>(w.size());
}

namespace {

struct Bounds {
  Box box;
  bool any = false;

  void add(const Coord& c) {
    for (int a = 0; a < c.dim(); ++a) {
      auto i = static_cast<std::size_t>(a);
      if (!any) {
        box.lo[i] = box.hi[i] = c[a];
      } else {
        box.lo[i] = std::min(box.lo[i], c[a]);
        box.hi[i] = std::max(box.hi[i], c[a]);
      }
    }
    any = true;
  }
};

// Every xi2 site is cut off from the window boundary by xi1.
bool enclosed(const Window& w, const std::vector<std::uint8_t>& mask1, const Bounds& b1,
              const std::vector<SiteIndex>& xi2, const Bounds& b2) {
  if (!b1.any) return false;
  for (int a = 0; a < w.dim(); ++a) {
    auto i = static_cast<std::size_t>(a);
    if (!(b1.box.lo[i] < b2.box.lo[i] && b2.box.hi[i] < b1.box.hi[i])) return false;
  }
  auto enc = enclosed_mask(mask1, w, b1.box);
  return std::all_of(xi2.begin(), xi2.end(), [&](SiteIndex s) { return enc[static_cast<std::size_t>(s)] != 0; });
}

// Replays the first `n` logged events on top of the initial sets.
bool enclosed_after(const Window& w, const std::vector<GrowthEvent>& log, std::size_t n) {
  std::vector<std::uint8_t> mask1(static_cast<std::size_t>(w.size()), 0);
  std::vector<SiteIndex> xi2;
  Bounds b1;
  Bounds b2;
  for (std::size_t i = 0; i < n; ++i) {
    const GrowthEvent& e = log[i];
    if (e.label == SiteLabel::type1) {
      mask1[static_cast<std::size_t>(e.site)] = 1;
      b1.add(w.coord(e.site));
    } else {
      xi2.push_back(e.site);
      b2.add(w.coord(e.site));
    }
  }
  return enclosed(w, mask1, b1, xi2, b2);
}

}  // namespace

EncapsulationOutcome encapsulation_run(const EncapsulationParams& p, const Window& w, RngStream& stream,
                                       RunRecord* record, SiteGrid* final_grid) {
  if (!(p.lambda > 0.0 && p.lambda < 1.0)) throw DomainError("lambda must lie in (0,1)");
  if (!(p.alpha > 1.0) || !(p.r > 0.0) || !(p.c_hat > 0.0)) throw DomainError("need alpha > 1, r > 0, c_hat > 0");
  const int d = w.dim();
  const auto half = static_cast<std::int64_t>(std::floor(p.c_hat * p.r));
  const auto start = static_cast<std::int64_t>(std::floor(p.c_hat * p.alpha * p.r)) + 1;
  if (start <= half) throw DomainError("alpha r does not clear the type-2 ball");
  if (start + p.margin >= w.radius()) throw DomainError("window too small for alpha r");

  GrowthSetup setup(w);
  {
    for (SiteIndex s = 0; s < w.size(); ++s) {
      if (w.linf_radius(s) <= half) setup.type2_init.push_back(s);
    }
    Coord x(d);
    if (p.placement == Placement::axis) {
      x[0] = start;
    } else {
      // uniform over the l-infinity sphere of radius `start`
      std::vector<SiteIndex> shell;
      for (SiteIndex s = 0; s < w.size(); ++s) {
        if (w.linf_radius(s) == start) shell.push_back(s);
      }
      x = w.coord(shell[stream.below(shell.size())]);
    }
    setup.type1_init.push_back(w.index(x));
  }
  setup.rate1 = 1.0;
  setup.rate2 = p.lambda;
  setup.t_max = p.t_max;
  setup.margin = p.margin;
  setup.margin1 = MarginPolicy::confine;
  setup.margin2 = MarginPolicy::stop;
  setup.keep_log = true;
  TwoTypeGrowth g(std::move(setup), stream);

  std::vector<std::uint8_t> mask1(static_cast<std::size_t>(w.size()), 0);
  std::vector<SiteIndex> xi2;
  Bounds b1;
  Bounds b2;
  std::size_t seen = 0;
  auto absorb_log = [&] {
    const auto& log = g.log();
    for (; seen < log.size(); ++seen) {
      const GrowthEvent& e = log[seen];
      if (e.label == SiteLabel::type1) {
        mask1[static_cast<std::size_t>(e.site)] = 1;
        b1.add(w.coord(e.site));
      } else {
        xi2.push_back(e.site);
        b2.add(w.coord(e.site));
      }
    }
  };

  EncapsulationOutcome out;
  std::size_t last_fail = 0;
  std::size_t since_check = 0;
  bool success = false;
  absorb_log();
  while (true) {
    bool moved = g.step();
    if (moved) ++since_check;
    const std::size_t cadence = std::max<std::size_t>(32, g.log().size() / 16);
    if (!moved || since_check >= cadence) {
      absorb_log();
      since_check = 0;
      if (g.stop_reason() != StopReason::margin && enclosed(w, mask1, b1, xi2, b2)) {
        success = true;
        break;
      }
      last_fail = g.log().size();
      if (!moved) break;
    }
  }

  if (success) {
    // first logged prefix that encloses; enclosure is monotone in time
    const auto& log = g.log();
    std::size_t lo = last_fail;
    std::size_t hi = log.size();
    while (hi - lo > 1) {
      std::size_t mid = lo + (hi - lo) / 2;
      if (enclosed_after(w, log, mid)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    out.success = true;
    out.surround_time = log[hi - 1].time;
    // only the sealed pocket can still change xi2
    auto enc = enclosed_mask(mask1, w, b1.box);
    for (std::size_t i = 0; i < enc.size(); ++i) {
      if (mask1[i] != 0) enc[i] = 0;
    }
    g.restrict_targets(std::move(enc));
    g.resume(p.t_max);
    g.run();
    out.stop = StopReason::success;
  } else {
    out.stop = g.stop_reason() == StopReason::margin ? StopReason::failure : g.stop_reason();
  }
  out.confinement_radius = g.max_radius(SiteLabel::type2);
  if (final_grid != nullptr) *final_grid = g.grid();

  if (record != nullptr) {
    record->process = "compete.encapsulation";
    record->master_seed = stream.master_seed();
    record->run_id = stream.run_id();
    record->dim = d;
    record->window_radius = w.radius();
    record->margin = p.margin;
    record->set("r", std::to_string(p.r));
    record->set("alpha", std::to_string(p.alpha));
    record->set("lambda", std::to_string(p.lambda));
    record->set("c_hat", std::to_string(p.c_hat));
    record->set("placement", p.placement == Placement::axis ? "axis" : "random_boundary");
    record->stop = out.stop;
    record->stop_time = out.success ? out.surround_time : g.time();
    if (!out.success && g.stop_reason() == StopReason::margin) {
      record->notes.emplace_back("xi2 reached the window margin");
    }
  }
  return out;
}

nlohmann::json EncapsulationReport::to_json() const {
  nlohmann::json j;
  j["reps"] = success.trials;
  j["successes"] = success.successes;
  j["success_frequency"] = success.estimate;
  j["wilson_lo"] = success.lo;
  j["wilson_hi"] = success.hi;
  std::vector<double> radii;
  for (const auto& o : outcomes) {
    if (o.success) radii.push_back(static_cast<double>(o.confinement_radius));
  }
  if (!radii.empty()) {
    std::sort(radii.begin(), radii.end());
    j["confinement_radius"]["mean"] = stats::mean(radii);
    j["confinement_radius"]["min"] = radii.front();
    j["confinement_radius"]["median"] = radii[radii.size() / 2];
    j["confinement_radius"]["max"] = radii.back();
  }
  return j;
}

EncapsulationReport encapsulation_experiment(const EncapsulationParams& params, std::size_t reps,
                                             const Window& window, std::uint64_t master_seed,
                                             unsigned threads) {
  EncapsulationReport rep;
  rep.outcomes.resize(reps);
  rep.runs.resize(reps);
  parallel_for(reps, threads, [&](std::size_t i) {
    RngStream stream(master_seed, i, "compete.encapsulation");
    rep.outcomes[i] = encapsulation_run(params, window, stream, &rep.runs[i]);
  });
  std::size_t wins = 0;
  for (const auto& o : rep.outcomes) wins += o.success ? 1 : 0;
  rep.success = stats::wilson(wins, reps);
  return rep;
}

AnnulusSchedule annulus_schedule(double r, double alpha, double lambda, int dim, double c_hat,
                                 double c_prime_hat) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("lambda must lie in (0,1)");
  if (!(alpha > 1.0)) throw DomainError("alpha must exceed 1");
  if (!(r > 0.0)) throw DomainError("r must be positive");
  if (dim < 1 || !(c_hat > 0.0) || c_prime_hat < c_hat) throw DomainError("need 0 < C <= C'");
  AnnulusSchedule s;
  s.delta = (1.0 - lambda) / 10.0;
  const double delta = s.delta;
  s.N = static_cast<int>(std::ceil(2.0 * dim * (c_prime_hat / c_hat) / (delta * delta)));
  const double ar = alpha * r;
  s.steps.reserve(static_cast<std::size_t>(s.N));
  for (int n = 1; n <= s.N; ++n) {
    AnnulusStep st;
    st.n = n;
    st.t_n = std::pow(1.0 + delta, n + 1) * delta * ar;
    st.T_n = (1.0 - std::pow(1.0 + delta, -n)) * std::pow(1.0 + delta, n + 2) * ar;
    st.radius = std::pow(1.0 + delta, n) * ar;
    s.steps.push_back(st);
  }
  return s;
}

}  // namespace latgrow

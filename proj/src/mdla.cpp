#include "latgrow/mdla.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "latgrow/fpphe.hpp"
#include "latgrow/parallel.hpp"

namespace latgrow {

void MdlaConfig::validate() const {
  if (!(mu > 0.0 && mu <= 1.0)) throw DomainError("mu must lie in (0, 1]");
  if (!(t_max > 0.0)) throw DomainError("t_max must be positive");
  if (margin < 0 || margin >= window.radius()) throw DomainError("margin must lie in [0, W)");
  if (target_radius && (*target_radius < 1 || *target_radius > window.radius())) {
    throw DomainError("target radius must lie in [1, W]");
  }
  if (static_cast<std::uint64_t>(window.size()) >= std::numeric_limits<std::uint32_t>::max()) {
    throw DomainError("window too large");
  }
}

SiteGrid MdlaRun::grid() const {
  SiteGrid g(window);
  for (const auto& [s, t] : aggregate) g.occupy(s, SiteLabel::aggregate, t);
  return g;
}

namespace {

constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();

RunRecord mdla_record(const MdlaConfig& c, const char* process, const RngStream& stream) {
  RunRecord rec;
  rec.process = process;
  rec.master_seed = stream.master_seed();
  rec.run_id = stream.run_id();
  rec.dim = c.window.dim();
  rec.window_radius = c.window.radius();
  rec.margin = c.margin;
  rec.set("mu", std::to_string(c.mu));
  rec.set("t_max", std::to_string(c.t_max));
  if (c.target_radius) rec.set("target_radius", std::to_string(*c.target_radius));
  return rec;
}

// Walks the checkpoint list as time advances.
struct CheckpointCursor {
  std::vector<double> points;
  std::size_t next = 0;

  void advance(double t_new, std::size_t mobile, MdlaRun& run) {
    while (next < points.size() && points[next] < t_new) {
      run.mobile_at.emplace_back(points[next], mobile);
      ++next;
    }
  }
};

std::vector<double> checkpoints_for(const MdlaConfig& c) {
  auto cps = c.checkpoints.empty() ? geometric_checkpoints(c.t_max) : c.checkpoints;
  std::sort(cps.begin(), cps.end());
  return cps;
}

// Position-indexed list for O(1) uniform choice and removal.
class IndexedList {
 public:
  explicit IndexedList(SiteIndex n) : pos_(static_cast<std::size_t>(n), kAbsent) {}

  std::size_t size() const { return items_.size(); }
  SiteIndex operator[](std::size_t i) const { return items_[i]; }
  bool contains(SiteIndex s) const { return pos_[static_cast<std::size_t>(s)] != kAbsent; }

  void add(SiteIndex s) {
    pos_[static_cast<std::size_t>(s)] = static_cast<std::uint32_t>(items_.size());
    items_.push_back(s);
  }
  void move(SiteIndex from, SiteIndex to) {
    std::uint32_t i = pos_[static_cast<std::size_t>(from)];
    pos_[static_cast<std::size_t>(from)] = kAbsent;
    pos_[static_cast<std::size_t>(to)] = i;
    items_[i] = to;
  }
  void remove(SiteIndex s) {
    std::uint32_t i = pos_[static_cast<std::size_t>(s)];
    SiteIndex last = items_.back();
    items_[i] = last;
    pos_[static_cast<std::size_t>(last)] = i;
    items_.pop_back();
    pos_[static_cast<std::size_t>(s)] = kAbsent;
  }

 private:
  std::vector<SiteIndex> items_;
  std::vector<std::uint32_t> pos_;
};

enum : std::uint8_t { kEmpty = 0, kMobile = 1, kAggregate = 2 };

// Returns true when the run must stop after attaching `s`.
bool attach(SiteIndex s, double t, const MdlaConfig& c, std::vector<std::uint8_t>& label, MdlaRun& run) {
  label[static_cast<std::size_t>(s)] = kAggregate;
  run.aggregate.emplace_back(s, t);
  std::int64_t r = c.window.linf_radius(s);
  if (c.target_radius && r >= *c.target_radius) {
    run.stop = StopReason::target;
    run.stop_time = t;
    return true;
  }
  if (r >= c.window.radius() - c.margin) {
    run.stop = StopReason::margin;
    run.stop_time = t;
    return true;
  }
  return false;
}

}  // namespace

MdlaRun run_direct(const MdlaConfig& config, RngStream& stream) {
  config.validate();
  const Window& w = config.window;
  const int dirs = w.directions();
  MdlaRun run(w);
  run.record = mdla_record(config, "mdla.direct", stream);

  RngStream place = stream.derive("particles");
  RngStream dyn = stream.derive("dynamics");
  SiteSet initial = sample_bernoulli_field(config.mu, w, true, place);

  std::vector<std::uint8_t> label(static_cast<std::size_t>(w.size()), kEmpty);
  IndexedList particles(w.size());
  for (SiteIndex s : initial.indices()) {
    label[static_cast<std::size_t>(s)] = kMobile;
    particles.add(s);
  }
  run.initial_mobile = particles.size();
  CheckpointCursor cursor{checkpoints_for(config)};

  double t = 0.0;
  attach(w.origin(), 0.0, config, label, run);
  while (true) {
    std::size_t n = particles.size();
    if (n == 0) {
      run.stop = StopReason::exhausted;
      run.stop_time = t;
      break;
    }
    double t_new = t + sample_exponential(static_cast<double>(n), dyn);
    if (t_new > config.t_max) {
      cursor.advance(config.t_max + 1e-12, n, run);
      run.stop = StopReason::t_max;
      run.stop_time = config.t_max;
      break;
    }
    cursor.advance(t_new, n, run);
    t = t_new;
    ++run.events;
    SiteIndex u = particles[dyn.below(n)];
    SiteIndex v = w.step(u, static_cast<int>(dyn.below(static_cast<std::uint64_t>(dirs))));
    if (v == kNoSite) continue;
    std::uint8_t lv = label[static_cast<std::size_t>(v)];
    if (lv == kMobile) continue;
    if (lv == kEmpty) {
      label[static_cast<std::size_t>(u)] = kEmpty;
      label[static_cast<std::size_t>(v)] = kMobile;
      particles.move(u, v);
      continue;
    }
    particles.remove(u);
    bool done = attach(u, t, config, label, run);
    if (particles.size() + run.aggregate.size() - 1 != run.initial_mobile) {
      throw InvariantError("particle count not conserved");
    }
    if (done) break;
  }
  run.final_mobile = particles.size();

  if (config.check_invariants) {
    std::size_t mobile = 0;
    for (SiteIndex s = 0; s < w.size(); ++s) {
      bool m = label[static_cast<std::size_t>(s)] == kMobile;
      if (m != particles.contains(s)) throw InvariantError("particle list out of sync");
      mobile += m ? 1 : 0;
    }
    if (mobile != particles.size()) throw InvariantError("exclusion violated");
  }
  run.record.stop = run.stop;
  run.record.stop_time = run.stop_time;
  return run;
}

MdlaRun run_holes(const MdlaConfig& config, RngStream& stream) {
  config.validate();
  const Window& w = config.window;
  const int dirs = w.directions();
  const double edge_rate = 1.0 / dirs;
  MdlaRun run(w);
  run.record = mdla_record(config, "mdla.holes", stream);

  RngStream vstream = stream.derive("values");
  RngStream dyn = stream.derive("dynamics");
  const auto n_sites = static_cast<std::size_t>(w.size());
  std::vector<std::uint32_t> value(n_sites);
  for (std::size_t i = 0; i < n_sites; ++i) {
    std::uint64_t v = sample_geometric_value(config.mu, vstream);
    if (v >= kAbsent) throw DomainError("site value overflow");
    value[i] = static_cast<std::uint32_t>(v);
  }
  std::vector<std::uint32_t> initial_value;
  std::vector<std::uint32_t> births;
  if (config.check_invariants) {
    initial_value = value;
    births.assign(n_sites, 0);
  }

  std::vector<std::uint8_t> label(n_sites, kEmpty);
  IndexedList holes(w.size());

  // Boundary edges (x in aggregate, x + e_k outside), keyed by aggregate slot * dirs + k.
  std::vector<std::uint32_t> agg_slot(n_sites, kAbsent);
  std::vector<SiteIndex> agg_site;
  std::vector<std::uint64_t> edges;
  std::vector<std::uint32_t> edge_pos;

  auto add_edge = [&](std::uint64_t key) {
    edge_pos[key] = static_cast<std::uint32_t>(edges.size());
    edges.push_back(key);
  };
  auto remove_edge = [&](std::uint64_t key) {
    std::uint32_t i = edge_pos[key];
    if (i == kAbsent) throw InvariantError("missing boundary edge");
    std::uint64_t last = edges.back();
    edges[i] = last;
    edge_pos[last] = i;
    edges.pop_back();
    edge_pos[key] = kAbsent;
  };
  auto grow = [&](SiteIndex y, double t) {
    auto slot = static_cast<std::uint32_t>(agg_site.size());
    agg_slot[static_cast<std::size_t>(y)] = slot;
    agg_site.push_back(y);
    edge_pos.resize(edge_pos.size() + static_cast<std::size_t>(dirs), kAbsent);
    for (int k = 0; k < dirs; ++k) {
      SiteIndex z = w.step(y, k);
      if (z == kNoSite) continue;
      if (label[static_cast<std::size_t>(z)] == kAggregate) {
        remove_edge(static_cast<std::uint64_t>(agg_slot[static_cast<std::size_t>(z)]) * dirs +
                    static_cast<std::uint64_t>(Window::reverse(k)));
      } else {
        add_edge(static_cast<std::uint64_t>(slot) * dirs + static_cast<std::uint64_t>(k));
      }
    }
    return attach(y, t, config, label, run);
  };

  run.initial_mobile = 0;
  CheckpointCursor cursor{checkpoints_for(config)};
  double t = 0.0;
  grow(w.origin(), 0.0);
  while (true) {
    const double e_total = static_cast<double>(edges.size()) * edge_rate;
    const double h_total = static_cast<double>(holes.size());
    const double total = e_total + h_total;
    if (total <= 0.0) {
      run.stop = StopReason::exhausted;
      run.stop_time = t;
      break;
    }
    double t_new = t + sample_exponential(total, dyn);
    if (t_new > config.t_max) {
      cursor.advance(config.t_max + 1e-12, holes.size(), run);
      run.stop = StopReason::t_max;
      run.stop_time = config.t_max;
      break;
    }
    cursor.advance(t_new, holes.size(), run);
    t = t_new;
    ++run.events;
    if (dyn.uniform01() * total < e_total) {
      std::uint64_t key = edges[dyn.below(edges.size())];
      SiteIndex x = agg_site[key / static_cast<std::uint64_t>(dirs)];
      SiteIndex y = w.step(x, static_cast<int>(key % static_cast<std::uint64_t>(dirs)));
      auto yi = static_cast<std::size_t>(y);
      if (label[yi] == kMobile) continue;
      if (value[yi] == 0) {
        if (grow(y, t)) break;
      } else {
        --value[yi];
        label[yi] = kMobile;
        holes.add(y);
        ++run.holes_born;
        if (!births.empty()) ++births[yi];
      }
    } else {
      SiteIndex h = holes[dyn.below(holes.size())];
      SiteIndex z = w.step(h, static_cast<int>(dyn.below(static_cast<std::uint64_t>(dirs))));
      if (z == kNoSite || label[static_cast<std::size_t>(z)] != kEmpty) continue;
      label[static_cast<std::size_t>(h)] = kEmpty;
      label[static_cast<std::size_t>(z)] = kMobile;
      holes.move(h, z);
    }
  }
  run.final_mobile = holes.size();

  if (config.check_invariants) {
    for (std::size_t i = 0; i < n_sites; ++i) {
      if (initial_value[i] - value[i] != births[i]) throw InvariantError("site value out of step with births");
    }
    std::size_t n_edges = 0;
    for (SiteIndex x : agg_site) {
      for (int k = 0; k < dirs; ++k) {
        SiteIndex z = w.step(x, k);
        if (z != kNoSite && label[static_cast<std::size_t>(z)] != kAggregate) ++n_edges;
      }
    }
    if (n_edges != edges.size()) throw InvariantError("boundary edge set out of sync");
  }
  run.record.stop = run.stop;
  run.record.stop_time = run.stop_time;
  return run;
}

std::optional<stats::LinearFit> loglog_fit(const std::vector<double>& t, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < t.size() && i < y.size(); ++i) {
    if (t[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(t[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  std::size_t half = lx.size() / 2;
  if (lx.size() - half < 4) return std::nullopt;
  return stats::least_squares(std::span(lx).subspan(half), std::span(ly).subspan(half));
}

GrowthMetrics fill_metrics(const MdlaRun& run, const std::vector<double>& checkpoints) {
  const Window& w = run.window;
  GrowthMetrics out;
  out.series.columns = {"t", "F_linf", "F_l2", "inscribed_radius", "mobile_remaining"};
  auto cps = checkpoints;
  std::sort(cps.begin(), cps.end());

  std::vector<std::uint8_t> mask(static_cast<std::size_t>(w.size()), 0);
  std::size_t next = 0;
  std::int64_t f_linf = 0;
  double f_l2 = 0.0;
  std::vector<double> ts, fronts, inscribed;
  for (double cp : cps) {
    if (cp > run.stop_time) break;
    while (next < run.aggregate.size() && run.aggregate[next].second <= cp) {
      SiteIndex s = run.aggregate[next].first;
      mask[static_cast<std::size_t>(s)] = 1;
      f_linf = std::max(f_linf, w.linf_radius(s));
      f_l2 = std::max(f_l2, w.coord(s).l2());
      ++next;
    }
    Box box;
    double insc = -1.0;
    if (bounding_box(mask, w, box)) {
      insc = static_cast<double>(inscribed_linf_radius(enclosed_mask(mask, w, box), w));
    }
    double mobile = std::numeric_limits<double>::quiet_NaN();
    for (const auto& [mt, m] : run.mobile_at) {
      if (mt == cp) mobile = static_cast<double>(m);
    }
    out.series.rows.push_back({cp, static_cast<double>(f_linf), f_l2, insc, mobile});
    ts.push_back(cp);
    fronts.push_back(static_cast<double>(f_linf));
    inscribed.push_back(insc);
  }
  out.front_fit = loglog_fit(ts, fronts);
  out.inscribed_fit = loglog_fit(ts, inscribed);
  return out;
}

nlohmann::json GrowthMetrics::to_json() const {
  auto fit_json = [](const std::optional<stats::LinearFit>& f) -> nlohmann::json {
    if (!f) return nullptr;
    return {{"slope", f->slope}, {"intercept", f->intercept}, {"slope_stderr", f->slope_stderr}, {"n", f->n}};
  };
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : series.rows) {
    nlohmann::json row = nlohmann::json::array();
    for (double v : r) row.push_back(std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v));
    rows.push_back(row);
  }
  return {{"columns", series.columns}, {"rows", rows}, {"front_fit", fit_json(front_fit)},
          {"inscribed_fit", fit_json(inscribed_fit)}};
}

ConstructionComparison compare_constructions(double mu, const Window& window, std::int64_t target,
                                             std::size_t reps, std::uint64_t master_seed, bool self_test,
                                             unsigned threads) {
  MdlaConfig cfg(window);
  cfg.mu = mu;
  cfg.t_max = 1e9;
  cfg.margin = 0;
  cfg.target_radius = target;
  cfg.checkpoints = {cfg.t_max};
  cfg.validate();

  std::vector<double> a(reps, -1.0), b(reps, -1.0);
  parallel_for(reps, threads, [&](std::size_t i) {
    RngStream sa(master_seed, i, "mdla.compare.direct");
    MdlaRun ra = run_direct(cfg, sa);
    if (ra.stop == StopReason::target) a[i] = ra.stop_time;
    if (self_test) {
      RngStream sb(master_seed, i, "mdla.compare.direct.b");
      MdlaRun rb = run_direct(cfg, sb);
      if (rb.stop == StopReason::target) b[i] = rb.stop_time;
    } else {
      RngStream sb(master_seed, i, "mdla.compare.holes");
      MdlaRun rb = run_holes(cfg, sb);
      if (rb.stop == StopReason::target) b[i] = rb.stop_time;
    }
  });
  ConstructionComparison out;
  for (std::size_t i = 0; i < reps; ++i) {
    if (a[i] >= 0.0) out.direct_times.push_back(a[i]); else ++out.unfinished;
    if (b[i] >= 0.0) out.holes_times.push_back(b[i]); else ++out.unfinished;
  }
  if (!out.direct_times.empty() && !out.holes_times.empty()) {
    out.ks = stats::ks_two_sample(out.direct_times, out.holes_times);
  }
  return out;
}

double coupling_lambda(int dim) {
  if (dim < 1) throw DomainError("dimension must be positive");
  return 1.0 - 1.0 / static_cast<double>(4 * dim - 1);
}

std::size_t domino_edge_count(int dim) {
  if (dim < 1) throw DomainError("dimension must be positive");
  return static_cast<std::size_t>(4 * dim - 1);
}

}  // namespace latgrow

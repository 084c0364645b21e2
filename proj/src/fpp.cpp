#include "latgrow/fpp.hpp"

#include <cmath>
#include <functional>
#include <queue>
#include <string>
#include <utility>

#include "latgrow/growth.hpp"
#include "latgrow/parallel.hpp"

namespace latgrow {

SiteSet ArrivalMap::ball(double t) const {
  std::vector<std::uint8_t> mask(time.size(), 0);
  for (std::size_t i = 0; i < time.size(); ++i) mask[i] = time[i] <= t ? 1 : 0;
  return SiteSet(window, std::move(mask));
}

PassageField draw_passage_field(double rate, const Window& window, RngStream& stream) {
  return PassageField::draw(rate, window, stream);
}

ArrivalMap arrival_times(std::span<const SiteIndex> sources, const PassageField& field, double horizon) {
  const Window& w = field.window();
  if (sources.empty()) throw DomainError("arrival_times needs at least one source");
  ArrivalMap map{w, {sources.begin(), sources.end()}, {}, horizon};
  map.time.assign(static_cast<std::size_t>(w.size()), kNever);

  using Item = std::pair<double, SiteIndex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (SiteIndex s : sources) {
    if (s < 0 || s >= w.size()) throw DomainError("source outside window");
    map.time[static_cast<std::size_t>(s)] = 0.0;
    heap.emplace(0.0, s);
  }
  std::vector<std::uint8_t> done(static_cast<std::size_t>(w.size()), 0);
  while (!heap.empty()) {
    auto [t, u] = heap.top();
    heap.pop();
    auto ui = static_cast<std::size_t>(u);
    if (done[ui] || t > map.time[ui]) continue;
    if (t > horizon) break;
    done[ui] = 1;
    for (int k = 0; k < w.directions(); ++k) {
      SiteIndex v = w.step(u, k);
      if (v == kNoSite) continue;
      auto vi = static_cast<std::size_t>(v);
      double cand = t + field.along(u, k);
      if (!done[vi] && cand < map.time[vi]) {
        map.time[vi] = cand;
        heap.emplace(cand, v);
      }
    }
  }
  for (std::size_t i = 0; i < done.size(); ++i) {
    if (!done[i]) map.time[i] = kNever;
  }
  if (auto bad = fixed_point_violation(map, field)) {
    throw InvariantError("arrival map fixed point fails at " + w.coord(*bad).str());
  }
  return map;
}

ArrivalMap arrival_times(const SiteSet& sources, const PassageField& field, double horizon) {
  auto idx = sources.indices();
  return arrival_times(std::span<const SiteIndex>(idx), field, horizon);
}

std::optional<SiteIndex> fixed_point_violation(const ArrivalMap& map, const PassageField& field) {
  const Window& w = map.window;
  std::vector<std::uint8_t> is_source(static_cast<std::size_t>(w.size()), 0);
  for (SiteIndex s : map.sources) is_source[static_cast<std::size_t>(s)] = 1;
  for (SiteIndex y = 0; y < w.size(); ++y) {
    const double ty = map.at(y);
    if (is_source[static_cast<std::size_t>(y)]) {
      if (ty != 0.0) return y;
      continue;
    }
    double best = kNever;
    for (int k = 0; k < w.directions(); ++k) {
      SiteIndex x = w.step(y, k);
      if (x == kNoSite || map.at(x) == kNever) continue;
      best = std::min(best, map.at(x) + field.along(y, k));
    }
    if (ty == kNever) {
      // beyond the horizon: no finished neighbor may reach y in time
      if (best <= map.horizon) return y;
    } else if (ty != best) {
      return y;
    }
  }
  return std::nullopt;
}

ArrivalMap event_driven_growth(std::span<const SiteIndex> sources, double rate, const Window& window,
                               double t_max, RngStream& stream, const PassageField* clocks) {
  if (sources.empty()) throw DomainError("event-driven growth needs at least one source");
  GrowthSetup setup(window);
  setup.type1_init.assign(sources.begin(), sources.end());
  setup.rate1 = rate;
  setup.t_max = t_max;
  setup.margin = 0;
  setup.margin1 = MarginPolicy::confine;
  setup.clock1 = clocks;
  TwoTypeGrowth g(std::move(setup), stream);
  g.run();
  ArrivalMap map{window, {sources.begin(), sources.end()}, {}, t_max};
  auto times = g.grid().times();
  map.time.assign(times.begin(), times.end());
  return map;
}

std::vector<Coord> shape_directions(int dim) {
  std::vector<Coord> dirs;
  for (int a = 0; a < dim; ++a) {
    for (int sgn : {1, -1}) {
      Coord c(dim);
      c[a] = sgn;
      dirs.push_back(c);
    }
  }
  for (int mask = 0; mask < (1 << dim); ++mask) {
    Coord c(dim);
    for (int a = 0; a < dim; ++a) c[a] = (mask >> a & 1) != 0 ? -1 : 1;
    dirs.push_back(c);
  }
  return dirs;
}

std::vector<std::int64_t> directional_radii(const ArrivalMap& map, double t) {
  const Window& w = map.window;
  std::vector<std::int64_t> out;
  for (const Coord& u : shape_directions(w.dim())) {
    std::int64_t best = -1;
    for (std::int64_t m = 0; m <= w.radius(); ++m) {
      Coord x(w.dim());
      for (int a = 0; a < w.dim(); ++a) x[a] = m * u[a];
      if (map.at(w.index(x)) <= t) best = m;
    }
    out.push_back(best);
  }
  return out;
}

namespace {

// Largest l-infinity radius among sites reached by time t.
std::int64_t reached_radius(const ArrivalMap& map, double t) {
  std::int64_t r = -1;
  for (SiteIndex s = 0; s < map.window.size(); ++s) {
    if (map.at(s) <= t) r = std::max(r, map.window.linf_radius(s));
  }
  return r;
}

RunRecord shape_record(const char* process, std::uint64_t seed, std::size_t rep, const Window& w,
                       std::int64_t margin, double rate, double t) {
  RunRecord rec;
  rec.process = process;
  rec.master_seed = seed;
  rec.run_id = rep;
  rec.dim = w.dim();
  rec.window_radius = w.radius();
  rec.margin = margin;
  rec.set("rate", std::to_string(rate));
  rec.set("t", std::to_string(t));
  return rec;
}

}  // namespace

nlohmann::json ShapeEstimate::to_json() const {
  nlohmann::json j;
  j["dim"] = dim;
  j["rate"] = rate;
  j["horizon"] = horizon;
  j["samples"] = samples;
  j["discarded"] = discarded;
  j["C_hat"] = c_hat;
  j["C_prime_hat"] = c_prime_hat;
  nlohmann::json dirs = nlohmann::json::array();
  for (std::size_t i = 0; i < directions.size(); ++i) {
    nlohmann::json d;
    d["direction"] = directions[i].str();
    d["speed_mean"] = speed_mean[i];
    d["speed_cv"] = speed_cv[i] ? nlohmann::json(*speed_cv[i]) : nlohmann::json(nullptr);
    dirs.push_back(d);
  }
  j["directions"] = dirs;
  return j;
}

ShapeEstimate estimate_shape(double rate, const Window& window, double t, std::size_t reps,
                             std::uint64_t master_seed, std::int64_t margin, unsigned threads) {
  if (!(t > 0.0)) throw DomainError("shape horizon must be positive");
  if (reps == 0) throw DomainError("estimate_shape needs reps >= 1");
  ShapeEstimate est;
  est.dim = window.dim();
  est.rate = rate;
  est.horizon = t;
  est.directions = shape_directions(window.dim());
  std::vector<std::vector<std::int64_t>> radii(reps);
  std::vector<RunRecord> records(reps);
  parallel_for(reps, threads, [&](std::size_t rep) {
    RngStream stream(master_seed, rep, "fpp.shape");
    PassageField field = draw_passage_field(rate, window, stream);
    const SiteIndex origin = window.origin();
    ArrivalMap map = arrival_times(std::span<const SiteIndex>(&origin, 1), field, t);
    RunRecord rec = shape_record("fpp.shape", master_seed, rep, window, margin, rate, t);
    if (reached_radius(map, t) >= window.radius() - margin) {
      rec.stop = StopReason::margin;
      rec.notes.emplace_back("front reached the window margin; run discarded");
    } else {
      rec.stop = StopReason::t_max;
      radii[rep] = directional_radii(map, t);
    }
    rec.stop_time = t;
    records[rep] = std::move(rec);
  });
  const std::size_t nd = est.directions.size();
  std::vector<std::vector<double>> speeds(nd);
  for (std::size_t rep = 0; rep < reps; ++rep) {
    if (radii[rep].empty()) {
      ++est.discarded;
      continue;
    }
    ++est.samples;
    for (std::size_t i = 0; i < nd; ++i) speeds[i].push_back(static_cast<double>(radii[rep][i]) / t);
  }
  est.runs = std::move(records);
  if (est.samples == 0) throw DomainError("every shape run reached the window margin");
  for (std::size_t i = 0; i < nd; ++i) {
    est.speed_mean.push_back(stats::mean(speeds[i]));
    est.speed_cv.push_back(stats::cv(speeds[i]));
  }
  est.c_hat = *std::min_element(est.speed_mean.begin(), est.speed_mean.end());
  est.c_prime_hat = *std::max_element(est.speed_mean.begin(), est.speed_mean.end());
  if (!(est.c_hat > 0.0)) throw DomainError("shape horizon too short: a direction never advanced");
  return est;
}

FluctuationResult fluctuation_frequency(double t, double delta, double rate, std::size_t reps,
                                        const Window& window, std::uint64_t master_seed,
                                        const ShapeEstimate* shape, std::int64_t margin,
                                        unsigned threads) {
  if (shape == nullptr) throw DomainError("fluctuation_frequency requires a ShapeEstimate");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
  if (!(t > 0.0)) throw DomainError("t must be positive");
  if (shape->dim != window.dim()) throw DomainError("shape estimate dimension mismatch");
  const double outer = (1.0 + delta) * shape->c_prime_hat * t;
  const double inner = (1.0 - delta) * shape->c_hat * t;
  if (std::ceil(outer) + static_cast<double>(margin) > static_cast<double>(window.radius())) {
    throw DomainError("window too small for the (1+delta) t box");
  }
  std::vector<int> outcome(reps, -1);
  std::vector<RunRecord> records(reps);
  parallel_for(reps, threads, [&](std::size_t rep) {
    RngStream stream = RngStream(master_seed, rep, "fpp.fluctuation").derive(std::to_string(t));
    PassageField field = draw_passage_field(rate, window, stream);
    const SiteIndex origin = window.origin();
    ArrivalMap map = arrival_times(std::span<const SiteIndex>(&origin, 1), field, t);
    RunRecord rec = shape_record("fpp.fluctuation", master_seed, rep, window, margin, rate, t);
    rec.set("delta", std::to_string(delta));
    bool event = false;
    std::int64_t reach = -1;
    for (SiteIndex s = 0; s < window.size(); ++s) {
      const auto r = static_cast<double>(window.linf_radius(s));
      const bool occ = map.at(s) <= t;
      if (occ) reach = std::max(reach, window.linf_radius(s));
      if ((occ && r > outer) || (!occ && r <= inner)) event = true;
    }
    rec.stop_time = t;
    if (reach >= window.radius() - margin) {
      rec.stop = StopReason::margin;
      rec.notes.emplace_back("front reached the window margin; run discarded");
    } else {
      rec.stop = StopReason::t_max;
      outcome[rep] = event ? 1 : 0;
    }
    rec.set("event", outcome[rep] < 0 ? "discarded" : (event ? "1" : "0"));
    records[rep] = std::move(rec);
  });
  FluctuationResult res;
  std::size_t hits = 0;
  std::size_t kept = 0;
  for (int o : outcome) {
    if (o < 0) {
      ++res.discarded;
    } else {
      ++kept;
      hits += static_cast<std::size_t>(o);
    }
  }
  res.frequency = stats::wilson(hits, kept);
  res.runs = std::move(records);
  return res;
}

}  // namespace latgrow

#include "latgrow/fpphe_det.hpp"

#include <functional>
#include <limits>
#include <queue>

#include "latgrow/parallel.hpp"

namespace latgrow {

void DetConfig::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0,1]");
  if (!(lambda.num() > 0 && lambda.num() < lambda.den())) throw DomainError("lambda must lie in (0,1)");
  if (margin < 0 || margin >= window.radius()) throw DomainError("margin must be in [0, W)");
  if (t_max && *t_max < RationalTime(0)) throw DomainError("t_max must be nonnegative");
}

RationalTime DetState::occupied_at(SiteIndex s) const {
  const std::int64_t t = tick[static_cast<std::size_t>(s)];
  if (t < 0) throw DomainError("site never occupied");
  return {t, ticks_per_unit};
}

std::vector<std::uint8_t> DetState::mask_at(SiteLabel l, std::int64_t t) const {
  std::vector<std::uint8_t> m(label.size(), 0);
  const std::int64_t limit = t * ticks_per_unit;
  for (std::size_t i = 0; i < label.size(); ++i) {
    m[i] = label[i] == l && tick[i] >= 0 && tick[i] <= limit ? 1 : 0;
  }
  return m;
}

DetState run_deterministic(const DetConfig& config, const SiteSet& seeds, RngStream& coin_stream) {
  config.validate();
  const Window& w = config.window;
  if (!(seeds.window() == w)) throw DomainError("seed set window mismatch");
  if (seeds.contains(w.origin())) throw DomainError("origin must not hold a seed");
  const std::int64_t a = config.lambda.num();
  const std::int64_t b = config.lambda.den();
  const auto n = static_cast<std::size_t>(w.size());

  DetState st{w, a, b, std::vector<SiteLabel>(n, SiteLabel::empty), std::vector<std::int64_t>(n, -1),
              std::vector<std::uint8_t>(n, 1), {}, 0, StopReason::none, 0};
  for (SiteIndex s : seeds.indices()) {
    st.label[static_cast<std::size_t>(s)] = SiteLabel::seed;
    st.open[static_cast<std::size_t>(s)] = 0;
  }

  const std::int64_t reach = w.radius() - config.margin;
  std::vector<std::uint8_t> zone(n, 0);
  for (SiteIndex s = 0; s < w.size(); ++s) {
    std::int64_t r = w.linf_radius(s);
    zone[static_cast<std::size_t>(s)] = r < reach ? 0 : (r == reach ? 1 : 2);
  }
  const bool confine = config.margin_policy == MarginPolicy::confine;
  auto wants = [&](std::size_t v, bool one) {
    if (confine && zone[v] == 2) return false;
    const SiteLabel l = st.label[v];
    if (l == SiteLabel::empty) return true;
    return l == SiteLabel::seed && (one || config.seed_rule == SeedRule::absorb);
  };

  // sources firing at tick T live in ring[T % L]; waits never exceed b
  const auto ring_len = static_cast<std::size_t>(b + 1);
  std::vector<std::vector<std::pair<SiteIndex, bool>>> ring(ring_len);
  std::int64_t pending = 0;
  auto occupy = [&](SiteIndex s, bool one, std::int64_t t) {
    auto i = static_cast<std::size_t>(s);
    st.label[i] = one ? SiteLabel::type1 : SiteLabel::type2;
    st.tick[i] = t;
    ring[static_cast<std::size_t>((t + (one ? a : b)) % static_cast<std::int64_t>(ring_len))].emplace_back(s, one);
    ++pending;
  };
  occupy(w.origin(), true, 0);

  std::int64_t limit = std::numeric_limits<std::int64_t>::max();
  if (config.t_max) limit = (*config.t_max * RationalTime(a)).floor();
  std::vector<std::uint8_t> flags(n, 0);
  std::vector<SiteIndex> touched;
  std::int64_t last = 0;
  bool contact = false;
  for (std::int64_t T = 1; pending > 0; ++T) {
    if (T > limit) {
      st.stop = StopReason::t_max;
      st.stop_tick = limit;
      return st;
    }
    auto batch = std::move(ring[static_cast<std::size_t>(T % static_cast<std::int64_t>(ring_len))]);
    ring[static_cast<std::size_t>(T % static_cast<std::int64_t>(ring_len))].clear();
    pending -= static_cast<std::int64_t>(batch.size());
    if (batch.empty()) continue;
    for (auto [u, one] : batch) {
      for (int k = 0; k < w.directions(); ++k) {
        SiteIndex v = w.step(u, k);
        if (v == kNoSite) continue;
        auto vi = static_cast<std::size_t>(v);
        if (!wants(vi, one)) continue;
        if (flags[vi] == 0) touched.push_back(v);
        flags[vi] |= one ? 1 : 2;
      }
    }
    for (SiteIndex v : touched) {
      auto vi = static_cast<std::size_t>(v);
      const std::uint8_t f = flags[vi];
      flags[vi] = 0;
      if (st.label[vi] == SiteLabel::seed) {
        // a type-1 attempt activates the seed; a lone type-2 attempt absorbs it
        if (f & 1) st.activations.emplace_back(v, T);
        occupy(v, false, T);
      } else {
        bool one = (f & 1) != 0;
        if (f == 3) {
          ++st.ties;
          switch (config.tie_rule) {
            case TieRule::coin: one = coin_stream.below(2) == 0; break;
            case TieRule::favor_type1: one = true; break;
            case TieRule::favor_type2: one = false; break;
          }
        }
        occupy(v, one, T);
      }
      if (zone[vi] != 0) contact = true;
      last = T;
    }
    touched.clear();
    if (contact && config.margin_policy == MarginPolicy::stop) {
      st.stop = StopReason::margin;
      st.stop_tick = T;
      return st;
    }
  }
  st.stop = StopReason::exhausted;
  st.stop_tick = last;
  return st;
}

DetState run_deterministic(const DetConfig& config, RngStream& stream) {
  config.validate();
  RngStream seed_stream = stream.derive("seeds");
  SiteSet seeds = sample_bernoulli_field(config.p, config.window, true, seed_stream);
  RngStream coins = stream.derive("coins");
  return run_deterministic(config, seeds, coins);
}

std::vector<std::uint8_t> DirectedCluster::at(std::int64_t t) const {
  std::vector<std::uint8_t> m(value.size(), 0);
  for (std::size_t i = 0; i < value.size(); ++i) m[i] = value[i] >= 0 && value[i] <= t ? 1 : 0;
  return m;
}

DirectedCluster directed_cluster(std::span<const std::uint8_t> open, const Window& window, std::int64_t t_max) {
  if (open.size() != static_cast<std::size_t>(window.size())) throw DomainError("open field size mismatch");
  DirectedCluster c{window, {open.begin(), open.end()}, std::vector<std::int64_t>(open.size(), -1)};
  const int d = window.dim();
  // predecessors x - e_i have smaller indices, so one increasing sweep suffices
  for (SiteIndex s = 0; s < window.size(); ++s) {
    auto i = static_cast<std::size_t>(s);
    if (!open[i]) continue;
    if (s == window.origin()) {
      c.value[i] = 0;
      continue;
    }
    std::int64_t best = -1;
    bool orthant = true;
    for (int a = 0; a < d && orthant; ++a) {
      const std::int64_t x = window.axis_coord(s, a);
      if (x < 0) orthant = false;
      if (x <= 0) continue;
      const std::int64_t pv = c.value[static_cast<std::size_t>(s - window.stride(a))];
      if (pv >= 0 && (best < 0 || pv < best)) best = pv;
    }
    if (orthant && best >= 0 && best + 1 <= t_max) c.value[i] = best + 1;
  }
  return c;
}

ContainmentResult containment_check(const DetState& state, const DirectedCluster& cluster, std::int64_t t) {
  if (!(state.window == cluster.window) || state.open != cluster.open) {
    throw DomainError("state and cluster use different open fields");
  }
  const std::int64_t limit = t * state.ticks_per_unit;
  for (std::size_t i = 0; i < cluster.value.size(); ++i) {
    const std::int64_t v = cluster.value[i];
    if (v < 0 || v > t) continue;
    if (state.label[i] != SiteLabel::type1 || state.tick[i] < 0 || state.tick[i] > limit) {
      return {false, state.window.coord(static_cast<SiteIndex>(i))};
    }
  }
  return {};
}

AxisProfile axis_profile(const DetState& state, int axis) {
  const Window& w = state.window;
  if (w.dim() != 2) throw DomainError("axis profile is defined for d = 2 only");
  if (axis != 0 && axis != 1) throw DomainError("axis must be 0 or 1");
  const int other = 1 - axis;
  AxisProfile prof;
  prof.axis = axis;
  for (std::int64_t k = 0; k <= w.radius(); ++k) {
    std::int64_t x = -1;
    std::int64_t y = -1;
    for (std::int64_t j = 0; j <= w.radius() && (x < 0 || y < 0); ++j) {
      for (int sign : {1, -1}) {
        Coord c(2);
        c[axis] = k;
        c[other] = sign * j;
        if (state.label[static_cast<std::size_t>(w.index(c))] != SiteLabel::type1) continue;
        if (sign > 0 && x < 0) x = j;
        if (sign < 0 && y < 0) y = j;
      }
    }
    prof.X.push_back(x);
    prof.Y.push_back(y);
  }
  return prof;
}

std::optional<std::int64_t> eta1_margin_tick(const DetState& state, std::int64_t margin) {
  const Window& w = state.window;
  std::optional<std::int64_t> best;
  for (SiteIndex s = 0; s < w.size(); ++s) {
    auto i = static_cast<std::size_t>(s);
    if (state.label[i] == SiteLabel::type1 && w.linf_radius(s) >= w.radius() - margin) {
      if (!best || state.tick[i] < *best) best = state.tick[i];
    }
  }
  return best;
}

std::optional<std::int64_t> eta2_spanning_tick(const DetState& state, std::int64_t margin) {
  const Window& w = state.window;
  const auto n = static_cast<std::size_t>(w.size());
  std::vector<std::int64_t> dist(n, std::numeric_limits<std::int64_t>::max());
  using Item = std::pair<std::int64_t, SiteIndex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (SiteIndex s = 0; s < w.size(); ++s) {
    auto i = static_cast<std::size_t>(s);
    if (state.label[i] == SiteLabel::type2 && w.linf_radius(s) <= w.radius() / 2) {
      dist[i] = state.tick[i];
      heap.emplace(dist[i], s);
    }
  }
  const std::int64_t reach = w.radius() - margin;
  while (!heap.empty()) {
    auto [t, u] = heap.top();
    heap.pop();
    if (t > dist[static_cast<std::size_t>(u)]) continue;
    if (w.linf_radius(u) >= reach) return t;
    for (int k = 0; k < w.directions(); ++k) {
      SiteIndex v = w.step(u, k);
      if (v == kNoSite) continue;
      auto vi = static_cast<std::size_t>(v);
      if (state.label[vi] != SiteLabel::type2) continue;
      std::int64_t cand = std::max(t, state.tick[vi]);
      if (cand < dist[vi]) {
        dist[vi] = cand;
        heap.emplace(cand, v);
      }
    }
  }
  return std::nullopt;
}

CoexistenceReport coexistence_scan(double p, RationalTime lambda, std::size_t reps, const Window& window,
                                   std::uint64_t master_seed, std::int64_t margin, SeedRule rule,
                                   unsigned threads) {
  DetConfig cfg(window);
  cfg.p = p;
  cfg.lambda = lambda;
  cfg.margin = margin;
  cfg.margin_policy = MarginPolicy::confine;
  cfg.seed_rule = rule;
  cfg.validate();
  CoexistenceReport rep;
  rep.rows.resize(reps);
  parallel_for(reps, threads, [&](std::size_t i) {
    RngStream stream(master_seed, i, "fpphe_det.coexistence");
    DetState st = run_deterministic(cfg, stream);
    auto t1 = eta1_margin_tick(st, margin);
    auto t2 = eta2_spanning_tick(st, margin);
    CoexistenceRow& row = rep.rows[i];
    row.rep = i;
    row.eta1_margin = t1.has_value();
    row.eta2_margin = t2.has_value();
    if (t1 && t2) row.first_joint_time = RationalTime(std::max(*t1, *t2), st.ticks_per_unit);
  });
  std::size_t n1 = 0, n2 = 0, nj = 0;
  for (const auto& r : rep.rows) {
    n1 += r.eta1_margin ? 1 : 0;
    n2 += r.eta2_margin ? 1 : 0;
    nj += r.first_joint_time ? 1 : 0;
  }
  rep.eta1 = stats::wilson(n1, reps);
  rep.eta2 = stats::wilson(n2, reps);
  rep.joint = stats::wilson(nj, reps);
  return rep;
}

}  // namespace latgrow

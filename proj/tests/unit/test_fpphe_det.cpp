#include <doctest.h>

#include "latgrow/fpphe_det.hpp"

using namespace latgrow;

namespace {

struct Ca {
  std::vector<SiteLabel> label;
  std::vector<std::int64_t> tick;
};

// Synchronous cellular automaton on integer ticks: every tick scans the
// whole window for sites whose neighbor fires exactly now. Ties go to type 1.
Ca cellular_oracle(const Window& w, const SiteSet& seeds, std::int64_t a, std::int64_t b, std::int64_t ticks,
                   bool absorb) {
  const auto n = static_cast<std::size_t>(w.size());
  Ca ca{std::vector<SiteLabel>(n, SiteLabel::empty), std::vector<std::int64_t>(n, -1)};
  for (SiteIndex s : seeds.indices()) ca.label[static_cast<std::size_t>(s)] = SiteLabel::seed;
  ca.label[static_cast<std::size_t>(w.origin())] = SiteLabel::type1;
  ca.tick[static_cast<std::size_t>(w.origin())] = 0;
  for (std::int64_t T = 1; T <= ticks; ++T) {
    std::vector<std::pair<SiteIndex, SiteLabel>> updates;
    for (SiteIndex v = 0; v < w.size(); ++v) {
      SiteLabel lv = ca.label[static_cast<std::size_t>(v)];
      if (lv != SiteLabel::empty && lv != SiteLabel::seed) continue;
      bool hit1 = false, hit2 = false;
      for (int k = 0; k < w.directions(); ++k) {
        SiteIndex u = w.step(v, k);
        if (u == kNoSite) continue;
        auto ui = static_cast<std::size_t>(u);
        if (ca.label[ui] == SiteLabel::type1 && ca.tick[ui] + a == T) hit1 = true;
        if (ca.label[ui] == SiteLabel::type2 && ca.tick[ui] + b == T) hit2 = true;
      }
      if (lv == SiteLabel::seed) {
        if (hit1 || (hit2 && absorb)) updates.emplace_back(v, SiteLabel::type2);
      } else if (hit1) {
        updates.emplace_back(v, SiteLabel::type1);
      } else if (hit2) {
        updates.emplace_back(v, SiteLabel::type2);
      }
    }
    for (auto [v, l] : updates) {
      ca.label[static_cast<std::size_t>(v)] = l;
      ca.tick[static_cast<std::size_t>(v)] = T;
    }
  }
  return ca;
}

DetConfig confined(const Window& w, RationalTime lambda) {
  DetConfig c(w);
  c.lambda = lambda;
  c.margin = 0;
  c.margin_policy = MarginPolicy::confine;
  c.tie_rule = TieRule::favor_type1;
  return c;
}

}  // namespace

TEST_CASE("deterministic dynamics match the cellular automaton oracle") {
  Window w(2, 12);
  for (RationalTime lam : {RationalTime(1, 2), RationalTime(9, 10), RationalTime(2, 3)}) {
    for (SeedRule rule : {SeedRule::absorb, SeedRule::block}) {
      for (std::uint64_t rep = 0; rep < 4; ++rep) {
        RngStream s(51, rep, "test");
        SiteSet seeds = sample_bernoulli_field(0.2, w, true, s);
        DetConfig c = confined(w, lam);
        c.seed_rule = rule;
        RngStream coins(51, rep, "coins");
        DetState st = run_deterministic(c, seeds, coins);
        REQUIRE(st.stop == StopReason::exhausted);
        Ca ca = cellular_oracle(w, seeds, lam.num(), lam.den(), st.stop_tick + lam.den() + 1,
                                rule == SeedRule::absorb);
        for (SiteIndex v = 0; v < w.size(); ++v) {
          INFO("lambda " << lam.str() << " site " << w.coord(v).str());
          REQUIRE(st.label[static_cast<std::size_t>(v)] == ca.label[static_cast<std::size_t>(v)]);
          REQUIRE(st.tick[static_cast<std::size_t>(v)] == ca.tick[static_cast<std::size_t>(v)]);
        }
      }
    }
  }
}

TEST_CASE("hand trace: seed beside the origin at lambda 1/2") {
  Window w(2, 8);
  SiteSet seeds(w);
  seeds.insert(Coord{1, 0});
  for (TieRule rule : {TieRule::favor_type1, TieRule::favor_type2}) {
    DetConfig c = confined(w, RationalTime(1, 2));
    c.tie_rule = rule;
    RngStream coins(52, 0, "test");
    DetState st = run_deterministic(c, seeds, coins);
    auto at = [&](std::int64_t x, std::int64_t y) { return w.index(Coord{x, y}); };
    CHECK(st.label[static_cast<std::size_t>(at(1, 0))] == SiteLabel::type2);
    CHECK(st.occupied_at(at(1, 0)) == RationalTime(1));
    CHECK(st.occupied_at(at(-1, 0)) == RationalTime(1));
    CHECK(st.occupied_at(at(1, 1)) == RationalTime(2));
    CHECK(st.label[static_cast<std::size_t>(at(2, 0))] == SiteLabel::type2);
    CHECK(st.occupied_at(at(2, 0)) == RationalTime(3));
    CHECK(st.occupied_at(at(3, 1)) == RationalTime(4));
    // (3,0): type 1 from (3,+-1) and type 2 from (2,0) both arrive at 5
    CHECK(st.occupied_at(at(3, 0)) == RationalTime(5));
    CHECK(st.label[static_cast<std::size_t>(at(3, 0))] ==
          (rule == TieRule::favor_type1 ? SiteLabel::type1 : SiteLabel::type2));
    CHECK(st.ties >= 1);
    REQUIRE(st.activations.size() == 1);
    CHECK(st.activations[0] == std::pair<SiteIndex, std::int64_t>{at(1, 0), 1});
  }
}

TEST_CASE("axis profile behind a single seed at lambda 9/10") {
  // type 2 runs along the axis from (5,0) at speed 9/10 against type 1 on
  // row 1 arriving at (k,0) at time k+2: 5 + 10(k-5)/9 < k+2 iff k < 23
  Window w(2, 40);
  SiteSet seeds(w);
  seeds.insert(Coord{5, 0});
  DetConfig c(w);
  c.lambda = RationalTime(9, 10);
  c.margin = 5;
  for (std::uint64_t rep = 0; rep < 6; ++rep) {
    RngStream coins(53, rep, "test");
    DetState st = run_deterministic(c, seeds, coins);
    AxisProfile prof = axis_profile(st, 0);
    for (std::int64_t k = 0; k <= 30; ++k) {
      INFO("k = " << k);
      auto x = prof.X[static_cast<std::size_t>(k)];
      if (k < 5 || k >= 24) {
        CHECK(x == 0);
      } else if (k <= 22) {
        CHECK(x == 1);
        CHECK(prof.Y[static_cast<std::size_t>(k)] == 1);
      } else {
        CHECK((x == 0 || x == 1));
      }
    }
  }
}

TEST_CASE("containment of the directed cluster") {
  Window w(2, 30);
  DetConfig c(w);
  c.p = 0.2;
  c.lambda = RationalTime(9, 10);
  c.margin = 5;
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    RngStream s(54, rep, "test");
    DetState st = run_deterministic(c, s);
    const std::int64_t T = st.stop_tick / st.ticks_per_unit;
    DirectedCluster cl = directed_cluster(st.open, w, T);
    for (std::int64_t t = 0; t <= T; ++t) {
      auto r = containment_check(st, cl, t);
      REQUIRE(r.pass);
    }
  }
}

TEST_CASE("containment check flags a cluster site that is not type 1") {
  Window w(2, 6);
  DetConfig c = confined(w, RationalTime(1, 2));
  SiteSet seeds(w);
  RngStream coins(55, 0, "test");
  DetState st = run_deterministic(c, seeds, coins);
  DirectedCluster cl = directed_cluster(st.open, w, 4);
  CHECK(containment_check(st, cl, 4).pass);
  st.label[static_cast<std::size_t>(w.index(Coord{1, 1}))] = SiteLabel::type2;
  auto r = containment_check(st, cl, 4);
  CHECK_FALSE(r.pass);
  REQUIRE(r.witness);
  CHECK(*r.witness == Coord{1, 1});
}

TEST_CASE("directed cluster on a full lattice is the l1 distance in the orthant") {
  Window w(2, 5);
  std::vector<std::uint8_t> open(static_cast<std::size_t>(w.size()), 1);
  open[static_cast<std::size_t>(w.index(Coord{1, 0}))] = 0;
  DirectedCluster cl = directed_cluster(open, w, 100);
  CHECK(cl.value[static_cast<std::size_t>(w.index(Coord{2, 3}))] == 5);
  CHECK(cl.value[static_cast<std::size_t>(w.index(Coord{1, 0}))] == -1);
  CHECK(cl.value[static_cast<std::size_t>(w.index(Coord{2, 0}))] == -1);
  CHECK(cl.value[static_cast<std::size_t>(w.index(Coord{-1, 0}))] == -1);
  CHECK(cl.at(2)[static_cast<std::size_t>(w.index(Coord{1, 1}))] == 1);
}

TEST_CASE("time limit and margin stop") {
  Window w(2, 20);
  DetConfig c(w);
  c.t_max = RationalTime(7, 2);
  c.lambda = RationalTime(1, 2);
  RngStream s(56, 0, "test");
  DetState st = run_deterministic(c, s);
  CHECK(st.stop == StopReason::t_max);
  CHECK(st.stop_time() == RationalTime(3));
  c.t_max.reset();
  c.margin = 4;
  RngStream s2(56, 0, "test");
  DetState st2 = run_deterministic(c, s2);
  CHECK(st2.stop == StopReason::margin);
  CHECK(st2.stop_time() == RationalTime(16));
}

TEST_CASE("coexistence scan is reproducible across thread counts") {
  Window w(2, 30);
  auto a = coexistence_scan(0.2, RationalTime(9, 10), 6, w, 57, 5, SeedRule::absorb, 1);
  auto b = coexistence_scan(0.2, RationalTime(9, 10), 6, w, 57, 5, SeedRule::absorb, 3);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(a.rows[i].eta1_margin == b.rows[i].eta1_margin);
    CHECK(a.rows[i].first_joint_time == b.rows[i].first_joint_time);
  }
}

TEST_CASE("spanning tick uses the bottleneck over a connected type-2 path") {
  Window w(2, 10);
  DetState st{w, 1, 2, std::vector<SiteLabel>(static_cast<std::size_t>(w.size()), SiteLabel::empty),
              std::vector<std::int64_t>(static_cast<std::size_t>(w.size()), -1),
              std::vector<std::uint8_t>(static_cast<std::size_t>(w.size()), 1), {}, 0, StopReason::none, 0};
  for (int x = 2; x <= 8; ++x) {
    auto i = static_cast<std::size_t>(w.index(Coord{x, 0}));
    st.label[i] = SiteLabel::type2;
    st.tick[i] = 10 + x;
  }
  CHECK(eta2_spanning_tick(st, 2) == 18);
  CHECK_FALSE(eta2_spanning_tick(st, 1).has_value());
  CHECK_FALSE(eta1_margin_tick(st, 2).has_value());
}

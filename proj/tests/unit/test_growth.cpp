#include <doctest.h>

#include "latgrow/fpp.hpp"
#include "latgrow/growth.hpp"

using namespace latgrow;

namespace {

struct Naive {
  std::vector<SiteLabel> label;
  std::vector<double> time;
};

// Quadratic-time oracle: repeatedly take the earliest pending (occupied u,
// target v) pair over the whole window.
Naive naive_two_type(const Window& w, const std::vector<SiteIndex>& one, const std::vector<SiteIndex>& two,
                     const std::vector<SiteIndex>& seeds, const PassageField& z1, const PassageField& z2,
                     SeedRule rule) {
  const auto n = static_cast<std::size_t>(w.size());
  Naive st{std::vector<SiteLabel>(n, SiteLabel::empty), std::vector<double>(n, kNever)};
  for (auto s : seeds) st.label[static_cast<std::size_t>(s)] = SiteLabel::seed;
  for (auto s : one) st.label[static_cast<std::size_t>(s)] = SiteLabel::type1, st.time[static_cast<std::size_t>(s)] = 0;
  for (auto s : two) st.label[static_cast<std::size_t>(s)] = SiteLabel::type2, st.time[static_cast<std::size_t>(s)] = 0;
  for (;;) {
    double best = kNever;
    SiteIndex bv = kNoSite;
    bool b1 = false;
    for (SiteIndex u = 0; u < w.size(); ++u) {
      SiteLabel lu = st.label[static_cast<std::size_t>(u)];
      if (lu != SiteLabel::type1 && lu != SiteLabel::type2) continue;
      const bool t1 = lu == SiteLabel::type1;
      for (int k = 0; k < w.directions(); ++k) {
        SiteIndex v = w.step(u, k);
        if (v == kNoSite) continue;
        SiteLabel lv = st.label[static_cast<std::size_t>(v)];
        bool ok = lv == SiteLabel::empty || (lv == SiteLabel::seed && (t1 || rule == SeedRule::absorb));
        if (!ok) continue;
        double c = st.time[static_cast<std::size_t>(u)] + (t1 ? z1 : z2).along(u, k);
        if (c < best) best = c, bv = v, b1 = t1;
      }
    }
    if (bv == kNoSite) break;
    auto vi = static_cast<std::size_t>(bv);
    // a type-1 touch wakes a seed as type 2
    st.label[vi] = (b1 && st.label[vi] != SiteLabel::seed) ? SiteLabel::type1 : SiteLabel::type2;
    st.time[vi] = best;
  }
  return st;
}

void compare(const TwoTypeGrowth& g, const Naive& o) {
  const Window& w = g.grid().window();
  for (SiteIndex s = 0; s < w.size(); ++s) {
    INFO("site " << w.coord(s).str());
    REQUIRE(g.grid().label(s) == o.label[static_cast<std::size_t>(s)]);
    if (o.time[static_cast<std::size_t>(s)] != kNever) {
      REQUIRE(g.grid().occupied_at(s) == doctest::Approx(o.time[static_cast<std::size_t>(s)]).epsilon(1e-12));
    }
  }
}

GrowthSetup confined(const Window& w) {
  GrowthSetup s(w);
  s.margin = 0;
  s.margin1 = MarginPolicy::confine;
  s.margin2 = MarginPolicy::confine;
  return s;
}

}  // namespace

TEST_CASE("two-type growth on fixed fields matches the naive oracle") {
  Window w(2, 5);
  for (std::uint64_t rep = 0; rep < 8; ++rep) {
    RngStream s(21, rep, "test");
    RngStream s1 = s.derive("z1"), s2 = s.derive("z2");
    PassageField z1 = PassageField::draw(1.0, w, s1);
    PassageField z2 = PassageField::draw(0.6, w, s2);
    GrowthSetup setup = confined(w);
    setup.type1_init = {w.origin()};
    setup.type2_init = {w.index(Coord{2, 0}), w.index(Coord{2, 1})};
    setup.clock1 = &z1;
    setup.clock2 = &z2;
    TwoTypeGrowth g(setup, s.derive("unused"));
    g.run();
    CHECK(g.stop_reason() == StopReason::exhausted);
    compare(g, naive_two_type(w, setup.type1_init, setup.type2_init, {}, z1, z2, SeedRule::absorb));
    CHECK(g.count(SiteLabel::type1) + g.count(SiteLabel::type2) == static_cast<std::size_t>(w.size()));
  }
}

TEST_CASE("seed activation and absorption match the naive oracle under both rules") {
  Window w(2, 5);
  for (SeedRule rule : {SeedRule::absorb, SeedRule::block}) {
    for (std::uint64_t rep = 0; rep < 6; ++rep) {
      RngStream s(22, rep, "test");
      RngStream s1 = s.derive("z1"), s2 = s.derive("z2"), sf = s.derive("seeds");
      PassageField z1 = PassageField::draw(1.0, w, s1);
      PassageField z2 = PassageField::draw(0.5, w, s2);
      GrowthSetup setup = confined(w);
      setup.type1_init = {w.origin()};
      setup.seeds = sample_bernoulli_field(0.25, w, true, sf).indices();
      setup.seed_rule = rule;
      setup.clock1 = &z1;
      setup.clock2 = &z2;
      TwoTypeGrowth g(setup, s.derive("unused"));
      g.run();
      compare(g, naive_two_type(w, setup.type1_init, {}, setup.seeds, z1, z2, rule));
    }
  }
}

TEST_CASE("margin stop ends the run at first contact") {
  Window w(2, 12);
  GrowthSetup setup(w);
  setup.type1_init = {w.origin()};
  setup.margin = 4;
  TwoTypeGrowth g(setup, RngStream(23, 0, "test"));
  g.run();
  CHECK(g.stop_reason() == StopReason::margin);
  CHECK(g.max_radius(SiteLabel::type1) == 8);
  REQUIRE(g.margin_contact(SiteLabel::type1).has_value());
  CHECK(*g.margin_contact(SiteLabel::type1) == doctest::Approx(g.time()));
}

TEST_CASE("t_max stops growth and nothing later is recorded") {
  Window w(2, 30);
  GrowthSetup setup(w);
  setup.type1_init = {w.origin()};
  setup.t_max = 3.0;
  TwoTypeGrowth g(setup, RngStream(24, 0, "test"));
  g.run();
  CHECK(g.stop_reason() == StopReason::t_max);
  for (double t : g.grid().times()) CHECK((t <= 3.0 || t == kNever));
}

TEST_CASE("a type-1 site surrounded by seeds under block is extinct") {
  Window w(2, 4);
  GrowthSetup setup = confined(w);
  setup.type1_init = {w.origin()};
  for (int k = 0; k < 4; ++k) setup.seeds.push_back(w.step(w.origin(), k));
  setup.stop_when_type1_blocked = true;
  TwoTypeGrowth g(setup, RngStream(25, 0, "test"));
  g.run();
  CHECK(g.count(SiteLabel::type1) == 1);
  CHECK(g.activations() == 4);
}

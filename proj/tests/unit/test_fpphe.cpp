#include <doctest.h>

#include <cmath>

#include "latgrow/fpphe.hpp"

using namespace latgrow;

TEST_CASE("fpphe config validation") {
  FppheConfig c(Window(2, 20));
  CHECK_NOTHROW(c.validate());
  c.p = 1.2;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.p = 0.1;
  c.lambda = 0.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("without seeds type 1 always reaches the margin") {
  FppheConfig c(Window(2, 25));
  c.p = 0.0;
  c.margin = 5;
  for (std::uint64_t r = 0; r < 5; ++r) {
    RngStream s(41, r, "test");
    FppheRun run = run_fpphe(c, s);
    CHECK(run.outcome.classification == Outcome::survived_to_boundary);
    CHECK(run.outcome.eta2 == 0);
    CHECK(run.activations.empty());
  }
}

TEST_CASE("seeds on every neighbor of the origin kill type 1 at once") {
  Window w(2, 10);
  FppheConfig c(w);
  c.margin = 2;
  SiteSet seeds(w);
  for (int k = 0; k < 4; ++k) seeds.insert(w.step(w.origin(), k));
  RngStream s(42, 0, "test");
  FppheRun run = run_fpphe(c, seeds, s);
  CHECK(run.outcome.classification == Outcome::extinct);
  CHECK(run.outcome.eta1 == 1);
  CHECK(run.activations.size() >= 1);
}

TEST_CASE("classify reads the final grid") {
  Window w(2, 6);
  SiteGrid g(w);
  g.occupy(w.origin(), SiteLabel::type1, 0.0);
  CHECK(classify(g, 2).classification == Outcome::undecided);
  for (int k = 0; k < 4; ++k) g.occupy(w.step(w.origin(), k), SiteLabel::type2, 1.0);
  auto o = classify(g, 2);
  CHECK(o.classification == Outcome::extinct);
  CHECK(o.extinction_time == 0.0);
  CHECK(o.eta2 == 4);

  SiteGrid h(w);
  h.occupy(w.index(Coord{4, 0}), SiteLabel::type1, 3.5);
  auto b = classify(h, 2);
  CHECK(b.classification == Outcome::survived_to_boundary);
  CHECK(b.boundary_time == 3.5);
}

TEST_CASE("geometric checkpoints") {
  auto c = geometric_checkpoints(4.0);
  REQUIRE(c.size() == 9);
  CHECK(c[0] == 1.0);
  CHECK(c[4] == doctest::Approx(2.0));
  CHECK(c[8] == doctest::Approx(4.0));
}

TEST_CASE("speed profile is monotone in time") {
  FppheConfig c(Window(2, 40));
  c.p = 0.02;
  RngStream s(43, 0, "test");
  FppheRun run = run_fpphe(c, s);
  auto prof = speed_profile(run.grid, run.stop_time);
  for (std::size_t i = 1; i < prof.size(); ++i) {
    CHECK(prof[i].max_radius >= prof[i - 1].max_radius);
    CHECK(prof[i].inscribed_radius <= prof[i].max_radius);
  }
}

TEST_CASE("without seeds lambda does not touch the run") {
  FppheConfig a(Window(2, 30)), b(Window(2, 30));
  a.p = 0.0;
  b.p = 0.0;
  a.keep_log = b.keep_log = true;
  b.lambda = 0.3;
  RngStream s1(44, 0, "test"), s2(44, 0, "test");
  auto ra = run_fpphe(a, s1);
  auto rb = run_fpphe(b, s2);
  REQUIRE(ra.log.size() == rb.log.size());
  for (std::size_t i = 0; i < ra.log.size(); ++i) CHECK(ra.log[i].time == rb.log[i].time);
}

TEST_CASE("summarize outcomes") {
  Window w(2, 50);
  std::vector<OutcomeRecord> recs(4);
  recs[0].classification = Outcome::survived_to_boundary;
  recs[0].boundary_time = 20.0;
  recs[1].classification = Outcome::survived_to_boundary;
  recs[1].boundary_time = 40.0;
  recs[2].classification = Outcome::extinct;
  recs[2].extinction_time = 3.0;
  auto row = summarize_outcomes(0.1, 0.5, recs, w, 10);
  CHECK(row.survived == 2);
  CHECK(row.extinct == 1);
  CHECK(row.undecided == 1);
  CHECK(row.survival.estimate == doctest::Approx(0.5));
  CHECK(row.mean_extinction_time == doctest::Approx(3.0));
  CHECK(row.mean_speed == doctest::Approx((40.0 / 20.0 + 40.0 / 40.0) / 2.0));
}

TEST_CASE("sweep is thread-count invariant") {
  Window w(2, 30);
  auto a = sweep({0.0, 0.3}, {0.5}, 6, w, 200.0, 45, 5, SeedRule::absorb, 1);
  auto b = sweep({0.0, 0.3}, {0.5}, 6, w, 200.0, 45, 5, SeedRule::absorb, 4);
  REQUIRE(a.size() == 2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].survived == b[i].survived);
    CHECK(a[i].extinct == b[i].extinct);
  }
  CHECK(a[0].survived == 6);
}

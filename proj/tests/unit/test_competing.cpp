#include <doctest.h>

#include <cmath>

#include "latgrow/competing.hpp"
#include "latgrow/fpp.hpp"

using namespace latgrow;

namespace {

CompetingConfig small_config() {
  Window w(2, 10);
  CompetingConfig c(w);
  c.xi1_init = {w.origin()};
  c.xi2_init = {w.index(Coord{3, 0})};
  c.lambda = 0.5;
  c.margin = 2;
  return c;
}

}  // namespace

TEST_CASE("competing config validation") {
  CompetingConfig c = small_config();
  CHECK_NOTHROW(c.validate());
  c.xi2_init.push_back(c.xi1_init[0]);
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = small_config();
  c.xi1_init.clear();
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = small_config();
  c.lambda = 1.5;
  CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("static-field assignment follows the smaller unrestricted distance") {
  CompetingConfig c = small_config();
  RngStream s(31, 0, "test");
  RngStream s1 = s.derive("a"), s2 = s.derive("b");
  PassageField z1 = PassageField::draw(1.0, c.window, s1);
  PassageField z2 = PassageField::draw(c.lambda, c.window, s2);
  CompetingRun run = run_static_field(c, 4.0, z1, z2);
  ArrivalMap d1 = arrival_times(std::span<const SiteIndex>(c.xi1_init), z1);
  ArrivalMap d2 = arrival_times(std::span<const SiteIndex>(c.xi2_init), z2);
  const double h = run.record.stop_time;
  CHECK(h <= 4.0);
  for (SiteIndex x = 0; x < c.window.size(); ++x) {
    SiteLabel l = run.grid.label(x);
    if (d1.at(x) <= d2.at(x) && d1.at(x) <= h) {
      CHECK(l == SiteLabel::type1);
    } else if (d2.at(x) < d1.at(x) && d2.at(x) <= h) {
      CHECK(l == SiteLabel::type2);
    } else {
      CHECK(l == SiteLabel::empty);
    }
  }
}

TEST_CASE("without type 2 the interacting and static modes coincide") {
  CompetingConfig c = small_config();
  c.xi2_init.clear();
  RngStream s(32, 0, "test");
  double dis = mode_disagreement(c, 5.0, s);
  CHECK(dis == 0.0);
}

TEST_CASE("annulus schedule formulas") {
  auto s = annulus_schedule(5.0, 4.0, 0.5, 2, 1.0, 1.5);
  CHECK(s.delta == doctest::Approx(0.05));
  CHECK(s.N == static_cast<int>(std::ceil(2 * 2 * 1.5 / 0.0025)));
  REQUIRE(s.steps.size() == static_cast<std::size_t>(s.N));
  const auto& st = s.steps[0];
  CHECK(st.radius == doctest::Approx(1.05 * 20.0));
  CHECK(st.t_n == doctest::Approx(1.05 * 1.05 * 0.05 * 20.0));
  CHECK(st.T_n == doctest::Approx((1 - 1 / 1.05) * std::pow(1.05, 3) * 20.0));
  CHECK_THROWS_AS(annulus_schedule(5.0, 4.0, 1.0), DomainError);
  CHECK_THROWS_AS(annulus_schedule(5.0, 0.5, 0.5), DomainError);
}

TEST_CASE("encapsulation run is reproducible and reports a radius") {
  EncapsulationParams p;
  p.r = 2;
  p.alpha = 3;
  p.lambda = 0.5;
  p.c_hat = 1.0;
  p.margin = 5;
  Window w(2, 30);
  RngStream a(33, 0, "test"), b(33, 0, "test");
  SiteGrid ga(w), gb(w);
  auto oa = encapsulation_run(p, w, a, nullptr, &ga);
  auto ob = encapsulation_run(p, w, b, nullptr, &gb);
  CHECK(oa.success == ob.success);
  CHECK(oa.confinement_radius == ob.confinement_radius);
  CHECK(oa.confinement_radius >= 2);
  CHECK(ga.labels().size() == gb.labels().size());
  CHECK(std::equal(ga.times().begin(), ga.times().end(), gb.times().begin()));
  if (oa.success) CHECK(oa.surround_time < kNever);
  p.alpha = 20;
  CHECK_THROWS_AS(encapsulation_run(p, w, a), DomainError);
}

TEST_CASE("encapsulation experiment is thread-count invariant") {
  EncapsulationParams p;
  p.r = 2;
  p.alpha = 3;
  p.c_hat = 1.0;
  p.margin = 5;
  Window w(2, 25);
  auto r1 = encapsulation_experiment(p, 8, w, 34, 1);
  auto r3 = encapsulation_experiment(p, 8, w, 34, 3);
  CHECK(r1.to_json().dump() == r3.to_json().dump());
  CHECK(r1.success.trials == 8);
}

#include <doctest.h>

#include <cmath>

#include "latgrow/fpp.hpp"

using namespace latgrow;

namespace {

// Plain Bellman-Ford relaxation over every directed edge until nothing moves.
std::vector<double> bellman_ford(const PassageField& f, const std::vector<SiteIndex>& sources) {
  const Window& w = f.window();
  std::vector<double> t(static_cast<std::size_t>(w.size()), kNever);
  for (SiteIndex s : sources) t[static_cast<std::size_t>(s)] = 0.0;
  for (bool changed = true; changed;) {
    changed = false;
    for (SiteIndex u = 0; u < w.size(); ++u) {
      if (t[static_cast<std::size_t>(u)] == kNever) continue;
      for (int k = 0; k < w.directions(); ++k) {
        SiteIndex v = w.step(u, k);
        if (v == kNoSite) continue;
        double c = t[static_cast<std::size_t>(u)] + f.along(u, k);
        if (c < t[static_cast<std::size_t>(v)]) {
          t[static_cast<std::size_t>(v)] = c;
          changed = true;
        }
      }
    }
  }
  return t;
}

}  // namespace

TEST_CASE("passage field is symmetric per edge") {
  Window w(2, 4);
  RngStream s(1, 0, "test");
  PassageField f = PassageField::draw(1.0, w, s);
  for (SiteIndex u = 0; u < w.size(); ++u) {
    for (int k = 0; k < w.directions(); ++k) {
      SiteIndex v = w.step(u, k);
      if (v == kNoSite) {
        CHECK(f.along(u, k) == kNever);
      } else {
        CHECK(f.along(u, k) == f.along(v, Window::reverse(k)));
        CHECK(f.along(u, k) > 0.0);
      }
    }
  }
  PassageField g = f.scaled(2.0);
  CHECK(g.along(w.origin(), 0) == doctest::Approx(2.0 * f.along(w.origin(), 0)));
}

TEST_CASE("arrival times agree with Bellman-Ford") {
  for (int d = 1; d <= 3; ++d) {
    Window w(d, d == 3 ? 3 : 6);
    for (std::uint64_t rep = 0; rep < 5; ++rep) {
      RngStream s(11, rep, "test");
      PassageField f = PassageField::draw(1.5, w, s);
      std::vector<SiteIndex> src{w.origin()};
      if (rep % 2 == 1) src.push_back(0);
      ArrivalMap m = arrival_times(std::span<const SiteIndex>(src), f);
      auto oracle = bellman_ford(f, src);
      for (SiteIndex v = 0; v < w.size(); ++v) {
        REQUIRE(m.at(v) == doctest::Approx(oracle[static_cast<std::size_t>(v)]).epsilon(1e-12));
      }
      CHECK_FALSE(fixed_point_violation(m, f));
    }
  }
}

TEST_CASE("horizon truncation keeps exactly the sites within the horizon") {
  Window w(2, 8);
  RngStream s(12, 0, "test");
  PassageField f = PassageField::draw(1.0, w, s);
  std::vector<SiteIndex> src{w.origin()};
  auto full = arrival_times(std::span<const SiteIndex>(src), f);
  auto cut = arrival_times(std::span<const SiteIndex>(src), f, 2.0);
  for (SiteIndex v = 0; v < w.size(); ++v) {
    if (full.at(v) <= 2.0) {
      CHECK(cut.at(v) == full.at(v));
    } else {
      CHECK(cut.at(v) == kNever);
    }
  }
  CHECK(cut.ball(2.0).count() == full.ball(2.0).count());
}

TEST_CASE("fixed point check catches a corrupted map") {
  Window w(2, 4);
  RngStream s(13, 0, "test");
  PassageField f = PassageField::draw(1.0, w, s);
  std::vector<SiteIndex> src{w.origin()};
  ArrivalMap m = arrival_times(std::span<const SiteIndex>(src), f);
  SiteIndex v = w.index(Coord{2, 1});
  m.time[static_cast<std::size_t>(v)] += 0.25;
  auto bad = fixed_point_violation(m, f);
  CHECK(bad.has_value());
}

TEST_CASE("event-driven growth on a given field equals the static arrival map") {
  Window w(2, 7);
  RngStream s(14, 0, "test");
  PassageField f = PassageField::draw(1.0, w, s);
  std::vector<SiteIndex> src{w.origin()};
  ArrivalMap stat = arrival_times(std::span<const SiteIndex>(src), f);
  RngStream unused(14, 1, "test");
  ArrivalMap ev = event_driven_growth(src, 1.0, w, kNever, unused, &f);
  for (SiteIndex v = 0; v < w.size(); ++v) REQUIRE(ev.at(v) == doctest::Approx(stat.at(v)).epsilon(1e-12));
}

TEST_CASE("deterministic unit passage times give graph distance") {
  Window w(2, 5);
  std::vector<double> ones(static_cast<std::size_t>(w.size() * 2), 1.0);
  PassageField f = PassageField::from_values(w, 1.0, ones);
  std::vector<SiteIndex> src{w.origin()};
  ArrivalMap m = arrival_times(std::span<const SiteIndex>(src), f);
  for (SiteIndex v = 0; v < w.size(); ++v) CHECK(m.at(v) == static_cast<double>(w.coord(v).l1()));
  auto radii = directional_radii(m, 3.0);
  auto dirs = shape_directions(2);
  REQUIRE(radii.size() == dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    // axis: 3 steps; diagonal m(1,1) costs 2m
    CHECK(radii[i] == (dirs[i].l1() == 1 ? 3 : 1));
  }
}

TEST_CASE("shape estimate yields positive speeds with C <= C'") {
  ShapeEstimate e = estimate_shape(1.0, Window(2, 40), 8.0, 6, 3);
  CHECK(e.samples > 0);
  CHECK(e.c_hat > 0.0);
  CHECK(e.c_hat <= e.c_prime_hat);
  for (double v : e.speed_mean) CHECK(v > 0.0);
}

TEST_CASE("rate scaling: doubling the rate halves arrival times in law") {
  Window w(2, 5);
  std::vector<double> a, b;
  for (std::uint64_t r = 0; r < 400; ++r) {
    RngStream s1(15, r, "a"), s2(15, r, "b");
    PassageField f1 = PassageField::draw(1.0, w, s1);
    PassageField f2 = PassageField::draw(2.0, w, s2);
    std::vector<SiteIndex> src{w.origin()};
    a.push_back(arrival_times(std::span<const SiteIndex>(src), f1).at(w.index(Coord{3, 0})) / 2.0);
    b.push_back(arrival_times(std::span<const SiteIndex>(src), f2).at(w.index(Coord{3, 0})));
  }
  CHECK(stats::ks_two_sample(a, b).p_value > 0.001);
}

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "latgrow/lattice.hpp"
#include "latgrow/passage_field.hpp"
#include "latgrow/rng.hpp"
#include "latgrow/run_record.hpp"
#include "latgrow/site_grid.hpp"
#include "latgrow/stats.hpp"

namespace latgrow {

/// First-arrival times from a source set. Sites beyond the horizon hold kNever.
struct ArrivalMap {
  Window window;
  std::vector<SiteIndex> sources;
  std::vector<double> time;
  double horizon = kNever;

  double at(SiteIndex s) const { return time[static_cast<std::size_t>(s)]; }
  /// {x : T(x) <= t}
  SiteSet ball(double t) const;
};

PassageField draw_passage_field(double rate, const Window& window, RngStream& stream);

/// Label-setting shortest paths; ties pop by site index. Every result is
/// checked against the fixed-point equation before it is returned.
ArrivalMap arrival_times(std::span<const SiteIndex> sources, const PassageField& field,
                         double horizon = kNever);
ArrivalMap arrival_times(const SiteSet& sources, const PassageField& field, double horizon = kNever);

/// First non-source site y with T(y) != min_x T(x) + zeta(x, y), if any.
std::optional<SiteIndex> fixed_point_violation(const ArrivalMap& map, const PassageField& field);

/// Rejection-free event-driven growth. With `clocks`, edge clocks are read
/// from the field and the result equals arrival_times exactly.
ArrivalMap event_driven_growth(std::span<const SiteIndex> sources, double rate, const Window& window,
                               double t_max, RngStream& stream, const PassageField* clocks = nullptr);

/// Axis directions +e1, -e1, ... then the 2^d diagonals.
std::vector<Coord> shape_directions(int dim);

/// Furthest m with T(m u) <= t along each shape direction u.
std::vector<std::int64_t> directional_radii(const ArrivalMap& map, double t);

struct ShapeEstimate {
  int dim = 0;
  double rate = 1.0;
  double horizon = 0.0;
  std::vector<Coord> directions;
  std::vector<double> speed_mean;  // l-infinity sites per unit time
  std::vector<std::optional<double>> speed_cv;
  double c_hat = 0.0;
  double c_prime_hat = 0.0;
  std::size_t samples = 0;
  std::size_t discarded = 0;
  std::vector<RunRecord> runs;

  nlohmann::json to_json() const;
};

ShapeEstimate estimate_shape(double rate, const Window& window, double t, std::size_t reps,
                             std::uint64_t master_seed, std::int64_t margin = 10,
                             unsigned threads = 1);

struct FluctuationResult {
  stats::Proportion frequency;  // over non-discarded runs
  std::size_t discarded = 0;
  std::vector<RunRecord> runs;
};

/// Frequency of {xi(t) leaves the (1+delta) t C' box} or {xi(t) misses part
/// of the (1-delta) t C box}, with C, C' taken from `shape`.
FluctuationResult fluctuation_frequency(double t, double delta, double rate, std::size_t reps,
                                        const Window& window, std::uint64_t master_seed,
                                        const ShapeEstimate* shape, std::int64_t margin = 10,
                                        unsigned threads = 1);

}  // namespace latgrow

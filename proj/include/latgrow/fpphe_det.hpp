#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "latgrow/growth.hpp"
#include "latgrow/lattice.hpp"
#include "latgrow/rational.hpp"
#include "latgrow/rng.hpp"
#include "latgrow/run_record.hpp"
#include "latgrow/site_grid.hpp"
#include "latgrow/stats.hpp"

namespace latgrow {

/// Critical probability of directed site percolation on Z^2, an external
/// literature value.
inline constexpr double kDirectedPercolationZ2 = 0.2945;

/// How a simultaneous type-1/type-2 arrival at an empty site is settled.
/// Only `coin` is the model; the others exist for oracle tests.
enum class TieRule : std::uint8_t { coin, favor_type1, favor_type2 };

struct DetConfig {
  explicit DetConfig(Window w) : window(std::move(w)) {}

  Window window;
  double p = 0.0;
  RationalTime lambda{1, 2};
  std::optional<RationalTime> t_max;  // none: run until the margin or exhaustion
  std::int64_t margin = 10;
  MarginPolicy margin_policy = MarginPolicy::stop;  // applies to both types
  SeedRule seed_rule = SeedRule::absorb;
  TieRule tie_rule = TieRule::coin;

  void validate() const;
};

/// Final state. Times are kept as integer ticks of length 1/a where
/// lambda = a/b; type 1 waits a ticks and type 2 waits b ticks.
struct DetState {
  Window window;
  std::int64_t ticks_per_unit = 1;  // a
  std::int64_t type2_wait = 1;      // b
  std::vector<SiteLabel> label;
  std::vector<std::int64_t> tick;   // -1 when never occupied
  std::vector<std::uint8_t> open;   // 1 unless the site held a seed at time 0
  std::vector<std::pair<SiteIndex, std::int64_t>> activations;
  std::size_t ties = 0;
  StopReason stop = StopReason::none;
  std::int64_t stop_tick = 0;

  RationalTime occupied_at(SiteIndex s) const;
  RationalTime stop_time() const { return {stop_tick, ticks_per_unit}; }
  /// Sites of `l` occupied at or before integer time t.
  std::vector<std::uint8_t> mask_at(SiteLabel l, std::int64_t t) const;
};

/// Seeds from stream.derive("seeds"); coins from stream.derive("coins").
DetState run_deterministic(const DetConfig& config, RngStream& stream);
DetState run_deterministic(const DetConfig& config, const SiteSet& seeds, RngStream& coin_stream);

struct DirectedCluster {
  Window window;
  std::vector<std::uint8_t> open;
  std::vector<std::int64_t> value;  // directed path length, -1 when unreachable

  /// C_t as a mask.
  std::vector<std::uint8_t> at(std::int64_t t) const;
};

/// Open directed paths from the origin along +e_i steps, lengths up to t_max.
DirectedCluster directed_cluster(std::span<const std::uint8_t> open, const Window& window,
                                 std::int64_t t_max);

struct ContainmentResult {
  bool pass = true;
  std::optional<Coord> witness;
};

/// Every site of C_t is type 1 with occupation time <= t.
ContainmentResult containment_check(const DetState& state, const DirectedCluster& cluster, std::int64_t t);

struct AxisProfile {
  int axis = 0;
  std::vector<std::int64_t> X;  // index k = 0..W, -1 when no type-1 site exists
  std::vector<std::int64_t> Y;
};

/// Smallest offsets above (X_k) and below (Y_k) the axis held by type 1 in column k.
AxisProfile axis_profile(const DetState& state, int axis = 0);

struct CoexistenceRow {
  std::size_t rep = 0;
  bool eta1_margin = false;
  bool eta2_margin = false;
  std::optional<RationalTime> first_joint_time;
};

struct CoexistenceReport {
  stats::Proportion eta1;
  stats::Proportion eta2;
  stats::Proportion joint;
  std::vector<CoexistenceRow> rows;
};

/// Earliest time a single connected eta2 cluster joins a site with
/// l-infinity radius <= W/2 to the margin ring (bottleneck over occupation times).
std::optional<std::int64_t> eta2_spanning_tick(const DetState& state, std::int64_t margin);
std::optional<std::int64_t> eta1_margin_tick(const DetState& state, std::int64_t margin);

/// Runs confined to the inner box until nothing can change.
CoexistenceReport coexistence_scan(double p, RationalTime lambda, std::size_t reps, const Window& window,
                                   std::uint64_t master_seed, std::int64_t margin = 10,
                                   SeedRule rule = SeedRule::absorb, unsigned threads = 1);

}  // namespace latgrow

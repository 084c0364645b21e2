#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "latgrow/lattice.hpp"
#include "latgrow/rng.hpp"
#include "latgrow/run_record.hpp"
#include "latgrow/site_grid.hpp"
#include "latgrow/stats.hpp"

namespace latgrow {

// Time unit: every mobile particle (or hole) attempts jumps at total rate 1,
// split evenly over its 2d directions. An aggregate-boundary edge therefore
// fires at rate 1/(2d) in both constructions; jumps leaving the window are
// suppressed (reflecting walls).

struct MdlaConfig {
  explicit MdlaConfig(Window w) : window(std::move(w)) {}

  Window window;
  double mu = 0.5;
  double t_max = 1000.0;
  std::int64_t margin = 10;
  std::optional<std::int64_t> target_radius;  // stop once the aggregate reaches this l-infinity radius
  std::vector<double> checkpoints;            // empty: 2^(k/4) up to t_max
  bool check_invariants = false;              // full exclusion/conservation checks

  void validate() const;
};

struct MdlaRun {
  explicit MdlaRun(Window w) : window(std::move(w)) {}

  Window window;
  std::vector<std::pair<SiteIndex, double>> aggregate;  // in order of attachment; origin first
  StopReason stop = StopReason::none;
  double stop_time = 0.0;
  std::vector<std::pair<double, std::size_t>> mobile_at;  // (checkpoint, particles or holes present)
  std::size_t initial_mobile = 0;
  std::size_t final_mobile = 0;
  std::size_t holes_born = 0;
  std::uint64_t events = 0;
  RunRecord record;

  /// Aggregate as a site grid (label aggregate, occupation times).
  SiteGrid grid() const;
};

/// Exclusion particles at density mu; a jump onto the aggregate freezes the
/// jumping particle where it stands.
MdlaRun run_direct(const MdlaConfig& config, RngStream& stream);

/// Geometric site values and holes: boundary edges discover a hole while the
/// value is positive, and the aggregate advances when it reaches zero.
MdlaRun run_holes(const MdlaConfig& config, RngStream& stream);

struct GrowthMetrics {
  MetricSeries series;  // t, F_linf, F_l2, inscribed_radius, mobile_remaining
  std::optional<stats::LinearFit> front_fit;      // log F_linf vs log t
  std::optional<stats::LinearFit> inscribed_fit;  // log inscribed vs log t

  nlohmann::json to_json() const;
};

/// Metrics at each checkpoint not after the stop time; fits use the second
/// half of checkpoints with positive radius and need at least 4 of them.
GrowthMetrics fill_metrics(const MdlaRun& run, const std::vector<double>& checkpoints);

/// Slope of log y vs log t over the second half of the points with y > 0.
std::optional<stats::LinearFit> loglog_fit(const std::vector<double>& t, const std::vector<double>& y);

struct ConstructionComparison {
  std::vector<double> direct_times;
  std::vector<double> holes_times;
  std::size_t unfinished = 0;  // runs that stopped before reaching the target
  stats::KsResult ks;
};

/// Hitting times of aggregate l-infinity radius `target` under both
/// constructions; `self_test` compares the direct construction with itself.
ConstructionComparison compare_constructions(double mu, const Window& window, std::int64_t target,
                                             std::size_t reps, std::uint64_t master_seed,
                                             bool self_test = false, unsigned threads = 1);

/// Backtracking rate 1 - 1/(4d - 1) used in the coupling to FPPHE.
double coupling_lambda(int dim);
/// Edges with at least one endpoint in the domino {x, x + e1}: 4d - 1.
std::size_t domino_edge_count(int dim);

}  // namespace latgrow

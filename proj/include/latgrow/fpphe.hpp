#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "latgrow/growth.hpp"
#include "latgrow/lattice.hpp"
#include "latgrow/rng.hpp"
#include "latgrow/run_record.hpp"
#include "latgrow/site_grid.hpp"
#include "latgrow/stats.hpp"

namespace latgrow {

/// Site percolation threshold of Z^2, an external literature value.
inline constexpr double kSitePercolationZ2 = 0.5927;

struct FppheConfig {
  explicit FppheConfig(Window w) : window(std::move(w)) {}

  Window window;
  double p = 0.0;
  double lambda = 0.5;
  double t_max = 1000.0;
  std::int64_t margin = 10;
  SeedRule seed_rule = SeedRule::absorb;
  bool keep_log = false;

  void validate() const;
};

enum class Outcome : std::uint8_t { extinct, survived_to_boundary, undecided };
std::string_view outcome_name(Outcome o);

struct OutcomeRecord {
  Outcome classification = Outcome::undecided;
  double extinction_time = kNever;  // last type-1 growth, when extinct
  double boundary_time = kNever;    // first type-1 margin contact
  std::size_t eta1 = 0;
  std::size_t eta2 = 0;

  nlohmann::json to_json() const;
};

struct FppheRun {
  SiteGrid grid;
  std::vector<SiteIndex> seeds;
  std::vector<std::pair<SiteIndex, double>> activations;
  std::vector<GrowthEvent> log;  // filled when keep_log is set
  std::size_t type1_firings_into_seeds = 0;
  double stop_time = 0.0;
  OutcomeRecord outcome;
  RunRecord record;
};

/// Seeds are drawn from stream.derive("seeds") and clocks from
/// stream.derive("clocks"), so runs at different p share clock draws.
FppheRun run_fpphe(const FppheConfig& config, RngStream& stream);
/// Runs on a given seed set.
FppheRun run_fpphe(const FppheConfig& config, const SiteSet& seeds, RngStream& clock_stream);

/// extinct when every outer-boundary site of eta1 holds type 2; survived when
/// eta1 reached the margin ring; otherwise undecided.
OutcomeRecord classify(const SiteGrid& grid, std::int64_t margin);

struct ProfilePoint {
  double t;
  std::int64_t max_radius;        // l-infinity, eta1
  std::int64_t inscribed_radius;  // l-infinity ball inside the enclosed region of eta1
};

/// Checkpoints t = 2^(k/4) for k >= 0 up to `until`.
std::vector<double> geometric_checkpoints(double until);
std::vector<ProfilePoint> speed_profile(const SiteGrid& grid, double until);

struct PhaseRow {
  double p = 0.0;
  double lambda = 0.0;
  std::size_t reps = 0;
  std::size_t survived = 0;
  std::size_t extinct = 0;
  std::size_t undecided = 0;
  stats::Proportion survival;
  double mean_extinction_time = 0.0;  // NaN when no run went extinct
  double mean_speed = 0.0;            // margin radius / boundary time, NaN without survivors
};

PhaseRow summarize_outcomes(double p, double lambda, const std::vector<OutcomeRecord>& outcomes,
                            const Window& window, std::int64_t margin);

std::vector<PhaseRow> sweep(const std::vector<double>& p_grid, const std::vector<double>& lambda_grid,
                            std::size_t reps, const Window& window, double t_max,
                            std::uint64_t master_seed, std::int64_t margin = 10,
                            SeedRule rule = SeedRule::absorb, unsigned threads = 1);

}  // namespace latgrow

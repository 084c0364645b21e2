#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "latgrow/lattice.hpp"
#include "latgrow/passage_field.hpp"
#include "latgrow/rng.hpp"
#include "latgrow/run_record.hpp"
#include "latgrow/site_grid.hpp"
#include "latgrow/stats.hpp"

namespace latgrow {

enum class CompeteMode : std::uint8_t { interacting, static_field };

struct CompetingConfig {
  explicit CompetingConfig(Window w) : window(std::move(w)) {}

  Window window;
  std::vector<SiteIndex> xi1_init;
  std::vector<SiteIndex> xi2_init;
  double lambda = 0.5;
  std::int64_t margin = 10;

  /// Throws DomainError on overlap, empty xi1, or lambda outside (0,1].
  void validate() const;
};

struct CompetingRun {
  SiteGrid grid;
  RunRecord record;
};

/// Markov competition: rate 1 clocks for type 1, rate lambda for type 2,
/// occupied targets block. Stops at t_max or when either type meets the margin.
/// With `clocks1`/`clocks2` the edge clocks are read from fixed fields.
CompetingRun run_interacting(const CompetingConfig& config, double t_max, RngStream& stream,
                             const PassageField* clocks1 = nullptr,
                             const PassageField* clocks2 = nullptr);

/// Assignment by unrestricted distances: x goes to type 1 when
/// D(x, xi1(0); zeta1) <= D(x, xi2(0); zeta2) and that distance is <= t.
CompetingRun run_static_field(const CompetingConfig& config, double t_max, RngStream& stream);
CompetingRun run_static_field(const CompetingConfig& config, double t_max, const PassageField& zeta1,
                              const PassageField& zeta2);

/// Fraction of window sites labelled differently by the two modes at t_max
/// when both read the same pair of fields.
double mode_disagreement(const CompetingConfig& config, double t_max, RngStream& stream);

enum class Placement : std::uint8_t { axis, random_boundary };

struct EncapsulationParams {
  double r = 5.0;
  double alpha = 2.0;
  double lambda = 0.5;
  double c_hat = 1.0;  // l-infinity surrogate: B(s) is the box of half-width c_hat * s
  Placement placement = Placement::axis;
  std::int64_t margin = 10;
  double t_max = kNever;
};

struct EncapsulationOutcome {
  bool success = false;
  std::int64_t confinement_radius = 0;
  double surround_time = kNever;
  StopReason stop = StopReason::none;
};

/// xi2(0) is the box of half-width floor(c_hat r); xi1(0) a single site just
/// outside the box of half-width c_hat alpha r. `final_grid` receives the end state.
EncapsulationOutcome encapsulation_run(const EncapsulationParams& params, const Window& window,
                                       RngStream& stream, RunRecord* record = nullptr,
                                       SiteGrid* final_grid = nullptr);

struct EncapsulationReport {
  stats::Proportion success;
  std::vector<EncapsulationOutcome> outcomes;
  std::vector<RunRecord> runs;

  nlohmann::json to_json() const;
};

EncapsulationReport encapsulation_experiment(const EncapsulationParams& params, std::size_t reps,
                                             const Window& window, std::uint64_t master_seed,
                                             unsigned threads = 1);

struct AnnulusStep {
  int n;
  double t_n;
  double T_n;
  double radius;
};

struct AnnulusSchedule {
  double delta = 0.0;
  int N = 0;
  std::vector<AnnulusStep> steps;  // n = 1..N
};

/// Sector schedule; N = ceil(2d (C'/C) / delta^2) under the box surrogate.
AnnulusSchedule annulus_schedule(double r, double alpha, double lambda, int dim = 2,
                                 double c_hat = 1.0, double c_prime_hat = 1.0);

}  // namespace latgrow

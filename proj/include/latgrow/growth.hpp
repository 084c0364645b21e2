#pragma once

// Exact continuous-time two-type growth on a window. Each (occupied u,
// target v) pair gets one exponential clock drawn when u is occupied; by
// memorylessness this is the same law as per-edge Poisson clocks, because
// only the first useful ring of a given pair can change the state.

#include <cstdint>
#include <optional>
#include <vector>

#include "latgrow/event_queue.hpp"
#include "latgrow/lattice.hpp"
#include "latgrow/passage_field.hpp"
#include "latgrow/rng.hpp"
#include "latgrow/run_record.hpp"
#include "latgrow/site_grid.hpp"

namespace latgrow {

/// What type 2 does when it reaches a dormant seed.
enum class SeedRule : std::uint8_t {
  absorb,  // the seed joins type 2 at that instant
  block,   // the seed stays dormant and blocks type 2
};

enum class MarginPolicy : std::uint8_t {
  stop,     // first contact ends the run
  confine,  // sites beyond the margin are never entered; contact recorded
};

struct GrowthSetup {
  explicit GrowthSetup(Window w) : window(std::move(w)) {}

  Window window;
  std::vector<SiteIndex> type1_init;
  std::vector<SiteIndex> type2_init;
  std::vector<SiteIndex> seeds;
  double rate1 = 1.0;
  double rate2 = 1.0;
  SeedRule seed_rule = SeedRule::absorb;
  double t_max = kNever;
  std::int64_t margin = 10;
  MarginPolicy margin1 = MarginPolicy::stop;
  MarginPolicy margin2 = MarginPolicy::stop;
  bool stop_when_type1_blocked = false;
  // When set, clocks are read from these fields instead of drawn.
  const PassageField* clock1 = nullptr;
  const PassageField* clock2 = nullptr;
  bool keep_log = false;
};

enum class GrowthEventKind : std::uint8_t { occupy, activate, absorb };

struct GrowthEvent {
  double time;
  SiteIndex site;
  SiteIndex from;
  SiteLabel label;
  GrowthEventKind kind;
};

class TwoTypeGrowth {
 public:
  TwoTypeGrowth(GrowthSetup setup, RngStream stream);

  /// Advances to the next state change; false once the run has stopped.
  bool step();
  void run() {
    while (step()) {
    }
  }

  double time() const { return now_; }
  bool stopped() const { return stop_ != StopReason::none; }
  StopReason stop_reason() const { return stop_; }
  void force_stop(StopReason reason);
  /// Clears a stop and continues with a new horizon.
  void resume(double t_max);

  const SiteGrid& grid() const { return grid_; }
  const GrowthSetup& setup() const { return setup_; }
  const std::vector<GrowthEvent>& log() const { return log_; }
  const GrowthEvent& last_event() const { return last_; }
  bool is_original_seed(SiteIndex s) const { return seed_mask_[static_cast<std::size_t>(s)] != 0; }

  std::size_t count(SiteLabel l) const { return l == SiteLabel::type1 ? n1_ : n2_; }
  std::int64_t max_radius(SiteLabel l) const { return l == SiteLabel::type1 ? r1_ : r2_; }
  std::optional<double> margin_contact(SiteLabel l) const {
    return l == SiteLabel::type1 ? margin_t1_ : margin_t2_;
  }
  std::size_t activations() const { return activations_; }
  std::size_t type1_firings_into_seeds() const { return firings_into_seeds_; }
  std::size_t pending_type1() const { return pending1_; }
  double last_type1_time() const { return last_t1_; }

  /// From now on, clocks aimed at sites outside `allowed` are discarded.
  void restrict_targets(std::vector<std::uint8_t> allowed);

 private:
  struct Pending {
    SiteIndex from;
    SiteIndex to;
    SiteLabel type;
  };

  void place(SiteIndex s, SiteLabel type, double t, SiteIndex from, GrowthEventKind kind);
  void schedule_from(SiteIndex u, SiteLabel type, double t);
  bool wants(SiteIndex v, SiteLabel type) const;

  GrowthSetup setup_;
  RngStream stream_;
  SiteGrid grid_;
  EventQueue<Pending> queue_;
  std::vector<std::uint8_t> zone_;  // 1: on the margin ring, 2: beyond it
  std::vector<std::uint8_t> seed_mask_;
  std::vector<std::uint8_t> allowed_;
  std::vector<GrowthEvent> log_;
  GrowthEvent last_{};
  double now_ = 0.0;
  StopReason stop_ = StopReason::none;
  std::size_t n1_ = 0, n2_ = 0;
  std::int64_t r1_ = -1, r2_ = -1;
  std::optional<double> margin_t1_, margin_t2_;
  std::size_t activations_ = 0;
  std::size_t firings_into_seeds_ = 0;
  std::size_t pending1_ = 0;
  double last_t1_ = 0.0;
};

}  // namespace latgrow

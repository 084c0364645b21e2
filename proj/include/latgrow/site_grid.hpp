#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "latgrow/lattice.hpp"

namespace latgrow {

inline constexpr double kNever = std::numeric_limits<double>::infinity();

enum class SiteLabel : std::uint8_t {
  empty = 0,
  type1,
  type2,
  seed,       // dormant type-2 seed
  particle,   // mobile MDLA particle
  aggregate,
  hole,       // mobile MDLA vacancy
};

std::string_view label_name(SiteLabel l);

/// Growth labels are permanent once written.
constexpr bool is_occupied(SiteLabel l) {
  return l == SiteLabel::type1 || l == SiteLabel::type2 || l == SiteLabel::aggregate;
}

/// Per-site label and occupation time over a window.
class SiteGrid {
 public:
  explicit SiteGrid(Window window);

  const Window& window() const { return window_; }
  SiteLabel label(SiteIndex s) const { return labels_[static_cast<std::size_t>(s)]; }
  double occupied_at(SiteIndex s) const { return times_[static_cast<std::size_t>(s)]; }

  /// Writes a growth label. Throws if the site already carries one.
  void occupy(SiteIndex s, SiteLabel label, double t) {
    auto i = static_cast<std::size_t>(s);
    if (is_occupied(labels_[i]) || !is_occupied(label)) {
      throw InvariantError("illegal occupation transition");
    }
    labels_[i] = label;
    times_[i] = t;
  }

  /// Changes a non-growth label (seed, particle, hole, empty).
  void set_mobile(SiteIndex s, SiteLabel label) {
    auto i = static_cast<std::size_t>(s);
    if (is_occupied(labels_[i]) || is_occupied(label)) {
      throw InvariantError("illegal mobile transition");
    }
    labels_[i] = label;
  }

  std::span<const SiteLabel> labels() const { return labels_; }
  std::span<const double> times() const { return times_; }

  SiteSet sites_with(SiteLabel l) const;
  /// Sites holding `l` with occupation time <= t.
  SiteSet occupied_by(SiteLabel l, double t) const;
  std::vector<std::uint8_t> occupied_mask(SiteLabel l, double t) const;
  std::size_t count(SiteLabel l) const;

 private:
  Window window_;
  std::vector<SiteLabel> labels_;
  std::vector<double> times_;
};

}  // namespace latgrow

#pragma once

#include <limits>
#include <vector>

#include "latgrow/lattice.hpp"
#include "latgrow/rng.hpp"

namespace latgrow {

/// Immutable per-edge passage times for one growth type. Edge (x, x + e_a)
/// is stored at slot x * d + a; edges leaving the window hold +infinity.
class PassageField {
 public:
  static PassageField draw(double rate, const Window& window, RngStream& stream);
  static PassageField from_values(const Window& window, double rate, std::vector<double> values);

  const Window& window() const { return window_; }
  double rate() const { return rate_; }

  /// Passage time of the edge leaving `s` in direction `k`.
  double along(SiteIndex s, int k) const {
    const int d = window_.dim();
    const int axis = k >> 1;
    if ((k & 1) == 0) return values_[static_cast<std::size_t>(s * d + axis)];
    SiteIndex t = window_.step(s, k);
    if (t == kNoSite) return std::numeric_limits<double>::infinity();
    return values_[static_cast<std::size_t>(t * d + axis)];
  }

  const std::vector<double>& values() const { return values_; }

  /// The same field with every value multiplied by c.
  PassageField scaled(double c) const;

 private:
  PassageField(Window window, double rate, std::vector<double> values)
      : window_(std::move(window)), rate_(rate), values_(std::move(values)) {}

  Window window_;
  double rate_;
  std::vector<double> values_;
};

}  // namespace latgrow

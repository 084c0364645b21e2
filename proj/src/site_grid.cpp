#include "latgrow/site_grid.hpp"

namespace latgrow {

std::string_view label_name(SiteLabel l) {
  switch (l) {
    case SiteLabel::empty: return "empty";
    case SiteLabel::type1: return "type1";
    case SiteLabel::type2: return "type2";
    case SiteLabel::seed: return "seed";
    case SiteLabel::particle: return "particle";
    case SiteLabel::aggregate: return "aggregate";
    case SiteLabel::hole: return "hole";
  }
  return "?";
}

SiteGrid::SiteGrid(Window window)
    : window_(std::move(window)),
      labels_(static_cast<std::size_t>(window_.size()), SiteLabel::empty),
      times_(static_cast<std::size_t>(window_.size()), kNever) {}

SiteSet SiteGrid::sites_with(SiteLabel l) const {
  SiteSet out(window_);
  for (SiteIndex s = 0; s < window_.size(); ++s) {
    if (labels_[static_cast<std::size_t>(s)] == l) out.insert(s);
  }
  return out;
}

std::vector<std::uint8_t> SiteGrid::occupied_mask(SiteLabel l, double t) const {
  std::vector<std::uint8_t> m(labels_.size(), 0);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    m[i] = labels_[i] == l && times_[i] <= t;
  }
  return m;
}

SiteSet SiteGrid::occupied_by(SiteLabel l, double t) const {
  return SiteSet(window_, occupied_mask(l, t));
}

std::size_t SiteGrid::count(SiteLabel l) const {
  std::size_t n = 0;
  for (auto x : labels_) n += x == l;
  return n;
}

}  // namespace latgrow

#include "latgrow/growth.hpp"

#include <string>

namespace latgrow {

namespace {

void check_sites(const Window& w, const std::vector<SiteIndex>& sites, const char* what) {
  for (SiteIndex s : sites) {
    if (s < 0 || s >= w.size()) throw DomainError(std::string(what) + " site outside window");
  }
}

}  // namespace

TwoTypeGrowth::TwoTypeGrowth(GrowthSetup setup, RngStream stream)
    : setup_(std::move(setup)), stream_(std::move(stream)), grid_(setup_.window) {
  const Window& w = setup_.window;
  if (!(setup_.rate1 > 0.0) || !(setup_.rate2 > 0.0)) throw DomainError("growth rates must be positive");
  if (setup_.margin < 0 || setup_.margin >= w.radius()) throw DomainError("margin must be in [0, W)");
  for (const PassageField* f : {setup_.clock1, setup_.clock2}) {
    if (f != nullptr && !(f->window() == w)) throw DomainError("passage field window mismatch");
  }
  check_sites(w, setup_.type1_init, "type-1");
  check_sites(w, setup_.type2_init, "type-2");
  check_sites(w, setup_.seeds, "seed");

  const auto n = static_cast<std::size_t>(w.size());
  zone_.assign(n, 0);
  const std::int64_t reach = w.radius() - setup_.margin;
  for (SiteIndex s = 0; s < w.size(); ++s) {
    std::int64_t r = w.linf_radius(s);
    zone_[static_cast<std::size_t>(s)] = r < reach ? 0 : (r == reach ? 1 : 2);
  }

  seed_mask_.assign(n, 0);
  for (SiteIndex s : setup_.seeds) {
    if (grid_.label(s) != SiteLabel::empty) throw DomainError("duplicate seed site");
    grid_.set_mobile(s, SiteLabel::seed);
    seed_mask_[static_cast<std::size_t>(s)] = 1;
  }
  for (SiteIndex s : setup_.type1_init) {
    if (grid_.label(s) != SiteLabel::empty) throw DomainError("initial sets overlap");
    place(s, SiteLabel::type1, 0.0, kNoSite, GrowthEventKind::occupy);
  }
  for (SiteIndex s : setup_.type2_init) {
    if (grid_.label(s) != SiteLabel::empty) throw DomainError("initial sets overlap");
    place(s, SiteLabel::type2, 0.0, kNoSite, GrowthEventKind::occupy);
  }
  if (stop_ == StopReason::none) {
    for (SiteIndex s : setup_.type1_init) schedule_from(s, SiteLabel::type1, 0.0);
    for (SiteIndex s : setup_.type2_init) schedule_from(s, SiteLabel::type2, 0.0);
    if (queue_.empty()) stop_ = StopReason::exhausted;
  }
}

bool TwoTypeGrowth::wants(SiteIndex v, SiteLabel type) const {
  const auto i = static_cast<std::size_t>(v);
  if (!allowed_.empty() && allowed_[i] == 0) return false;
  const SiteLabel l = grid_.label(v);
  const MarginPolicy policy = type == SiteLabel::type1 ? setup_.margin1 : setup_.margin2;
  if (policy == MarginPolicy::confine && zone_[i] == 2) return false;
  if (l == SiteLabel::empty) return true;
  if (l != SiteLabel::seed) return false;
  return type == SiteLabel::type1 || setup_.seed_rule == SeedRule::absorb;
}

void TwoTypeGrowth::schedule_from(SiteIndex u, SiteLabel type, double t) {
  const Window& w = setup_.window;
  const bool one = type == SiteLabel::type1;
  const PassageField* field = one ? setup_.clock1 : setup_.clock2;
  const double rate = one ? setup_.rate1 : setup_.rate2;
  for (int k = 0; k < w.directions(); ++k) {
    SiteIndex v = w.step(u, k);
    if (v == kNoSite || !wants(v, type)) continue;
    double dt = field != nullptr ? field->along(u, k) : sample_exponential(rate, stream_);
    queue_.push(t + dt, Pending{u, v, type});
    if (one) ++pending1_;
  }
}

void TwoTypeGrowth::place(SiteIndex s, SiteLabel type, double t, SiteIndex from,
                          GrowthEventKind kind) {
  grid_.occupy(s, type, t);
  const std::int64_t r = setup_.window.linf_radius(s);
  const bool one = type == SiteLabel::type1;
  if (one) {
    ++n1_;
    r1_ = std::max(r1_, r);
  } else {
    ++n2_;
    r2_ = std::max(r2_, r);
  }
  now_ = t;
  last_ = GrowthEvent{t, s, from, type, kind};
  if (setup_.keep_log) log_.push_back(last_);
  if (zone_[static_cast<std::size_t>(s)] != 0) {
    auto& contact = one ? margin_t1_ : margin_t2_;
    if (!contact) contact = t;
    const MarginPolicy policy = one ? setup_.margin1 : setup_.margin2;
    if (policy == MarginPolicy::stop) stop_ = StopReason::margin;
  }
}

bool TwoTypeGrowth::step() {
  while (stop_ == StopReason::none) {
    if (queue_.empty()) {
      stop_ = StopReason::exhausted;
      break;
    }
    if (queue_.top().time > setup_.t_max) {
      now_ = setup_.t_max;
      stop_ = StopReason::t_max;
      break;
    }
    auto e = queue_.pop();
    const Pending& p = e.payload;
    const bool one = p.type == SiteLabel::type1;
    if (one) --pending1_;
    const SiteLabel target = grid_.label(p.to);
    if (one && seed_mask_[static_cast<std::size_t>(p.to)] != 0) ++firings_into_seeds_;

    bool changed = false;
    if (wants(p.to, p.type)) {
      if (target == SiteLabel::seed) {
        // type 1 wakes the seed; type 2 (absorb rule) swallows it
        if (one) {
          ++activations_;
          last_t1_ = e.time;
        }
        place(p.to, SiteLabel::type2, e.time, p.from,
              one ? GrowthEventKind::activate : GrowthEventKind::absorb);
        schedule_from(p.to, SiteLabel::type2, e.time);
      } else {
        if (one) last_t1_ = e.time;
        place(p.to, p.type, e.time, p.from, GrowthEventKind::occupy);
        schedule_from(p.to, p.type, e.time);
      }
      changed = true;
    }
    if (stop_ == StopReason::none && setup_.stop_when_type1_blocked && pending1_ == 0) {
      stop_ = StopReason::extinct;
    }
    if (changed) return true;
  }
  return false;
}

void TwoTypeGrowth::force_stop(StopReason reason) {
  if (stop_ == StopReason::none) stop_ = reason;
}

void TwoTypeGrowth::resume(double t_max) {
  setup_.t_max = t_max;
  if (queue_.empty()) {
    stop_ = StopReason::exhausted;
  } else {
    stop_ = StopReason::none;
  }
}

void TwoTypeGrowth::restrict_targets(std::vector<std::uint8_t> allowed) {
  if (allowed.size() != static_cast<std::size_t>(setup_.window.size())) {
    throw DomainError("target mask size mismatch");
  }
  allowed_ = std::move(allowed);
}

}  // namespace latgrow

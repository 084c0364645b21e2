#include "latgrow/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace latgrow {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw DomainError("coordinate overflow");
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_sub_overflow(a, b, &r)) throw DomainError("coordinate overflow");
  return r;
}

// Odometer over the box lo..hi (inclusive) in axis-0-fastest order.
template <typename F>
void for_each_in_box(int dim, const std::array<std::int64_t, kMaxDim>& lo,
                     const std::array<std::int64_t, kMaxDim>& hi, F&& f) {
  for (int a = 0; a < dim; ++a) {
    if (lo[static_cast<std::size_t>(a)] > hi[static_cast<std::size_t>(a)]) return;
  }
  std::array<std::int64_t, kMaxDim> x = lo;
  while (true) {
    f(x);
    int a = 0;
    for (; a < dim; ++a) {
      auto i = static_cast<std::size_t>(a);
      if (x[i] < hi[i]) {
        ++x[i];
        break;
      }
      x[i] = lo[i];
    }
    if (a == dim) return;
  }
}

}  // namespace

Coord::Coord(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) throw DomainError("dimension out of range");
}

Coord::Coord(std::initializer_list<std::int64_t> components)
    : dim_(static_cast<int>(components.size())) {
  if (dim_ < 1 || dim_ > kMaxDim) throw DomainError("dimension out of range");
  std::copy(components.begin(), components.end(), c_.begin());
}

Coord Coord::operator+(const Coord& other) const {
  if (dim_ != other.dim_) throw DomainError("dimension mismatch");
  Coord r(dim_);
  for (int i = 0; i < dim_; ++i) r[i] = checked_add((*this)[i], other[i]);
  return r;
}

Coord Coord::operator-(const Coord& other) const {
  if (dim_ != other.dim_) throw DomainError("dimension mismatch");
  Coord r(dim_);
  for (int i = 0; i < dim_; ++i) r[i] = checked_sub((*this)[i], other[i]);
  return r;
}

std::int64_t Coord::linf() const {
  std::int64_t m = 0;
  for (int i = 0; i < dim_; ++i) m = std::max(m, std::abs((*this)[i]));
  return m;
}

std::int64_t Coord::l1() const {
  std::int64_t m = 0;
  for (int i = 0; i < dim_; ++i) m = checked_add(m, std::abs((*this)[i]));
  return m;
}

double Coord::l2() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) {
    auto v = static_cast<double>((*this)[i]);
    s += v * v;
  }
  return std::sqrt(s);
}

std::string Coord::str() const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << (*this)[i];
  os << ')';
  return os.str();
}

Window::Window(int dim, std::int64_t radius) : dim_(dim), radius_(radius) {
  if (dim < 1 || dim > kMaxDim) throw DomainError("window dimension out of range");
  if (radius < 1) throw DomainError("window radius must be positive");
  if (radius > (std::int64_t{1} << 30)) throw DomainError("window radius too large");
  side_ = 2 * radius + 1;
  SiteIndex n = 1;
  for (int a = 0; a < dim; ++a) {
    stride_[static_cast<std::size_t>(a)] = n;
    if (__builtin_mul_overflow(n, side_, &n) || n > (SiteIndex{1} << 36)) {
      throw DomainError("window has too many sites");
    }
  }
  size_ = n;
  origin_ = 0;
  for (int a = 0; a < dim; ++a) origin_ += radius_ * stride_[static_cast<std::size_t>(a)];
  for (int a = 0; a < dim; ++a) {
    offset_[static_cast<std::size_t>(2 * a)] = stride_[static_cast<std::size_t>(a)];
    offset_[static_cast<std::size_t>(2 * a + 1)] = -stride_[static_cast<std::size_t>(a)];
  }

  auto border = std::make_shared<std::vector<std::uint16_t>>(static_cast<std::size_t>(size_), 0);
  std::array<std::int64_t, kMaxDim> lo{};
  std::array<std::int64_t, kMaxDim> hi{};
  for (int a = 0; a < dim; ++a) hi[static_cast<std::size_t>(a)] = side_ - 1;
  std::size_t s = 0;
  for_each_in_box(dim, lo, hi, [&](const std::array<std::int64_t, kMaxDim>& x) {
    std::uint16_t bits = 0;
    for (int a = 0; a < dim; ++a) {
      if (x[static_cast<std::size_t>(a)] == side_ - 1) bits |= static_cast<std::uint16_t>(1U << (2 * a));
      if (x[static_cast<std::size_t>(a)] == 0) bits |= static_cast<std::uint16_t>(1U << (2 * a + 1));
    }
    (*border)[s++] = bits;
  });
  border_ = std::move(border);
}

bool Window::contains(const Coord& x) const {
  if (x.dim() != dim_) return false;
  for (int a = 0; a < dim_; ++a) {
    if (x[a] < -radius_ || x[a] > radius_) return false;
  }
  return true;
}

SiteIndex Window::index(const Coord& x) const {
  if (!contains(x)) throw DomainError("site " + x.str() + " outside window");
  SiteIndex s = 0;
  for (int a = 0; a < dim_; ++a) s += (x[a] + radius_) * stride_[static_cast<std::size_t>(a)];
  return s;
}

Coord Window::coord(SiteIndex s) const {
  if (s < 0 || s >= size_) throw DomainError("site index outside window");
  Coord x(dim_);
  for (int a = 0; a < dim_; ++a) {
    x[a] = s % side_ - radius_;
    s /= side_;
  }
  return x;
}

std::int64_t Window::linf_radius(SiteIndex s) const {
  std::int64_t m = 0;
  for (int a = 0; a < dim_; ++a) {
    m = std::max(m, std::abs(s % side_ - radius_));
    s /= side_;
  }
  return m;
}

SiteSet::SiteSet(Window window)
    : window_(std::move(window)), mask_(static_cast<std::size_t>(window_.size()), 0) {}

SiteSet::SiteSet(Window window, std::vector<std::uint8_t> mask)
    : window_(std::move(window)), mask_(std::move(mask)) {
  if (mask_.size() != static_cast<std::size_t>(window_.size())) {
    throw DomainError("mask size does not match window");
  }
  for (auto& m : mask_) {
    m = m ? 1 : 0;
    count_ += m;
  }
}

bool SiteSet::contains(const Coord& x) const {
  return window_.contains(x) && contains(window_.index(x));
}

void SiteSet::insert(SiteIndex s) {
  auto& m = mask_[static_cast<std::size_t>(s)];
  if (!m) {
    m = 1;
    ++count_;
  }
}

void SiteSet::insert(const Coord& x) { insert(window_.index(x)); }

void SiteSet::erase(SiteIndex s) {
  auto& m = mask_[static_cast<std::size_t>(s)];
  if (m) {
    m = 0;
    --count_;
  }
}

std::vector<SiteIndex> SiteSet::indices() const {
  std::vector<SiteIndex> out;
  out.reserve(count_);
  for (std::size_t i = 0; i < mask_.size(); ++i) {
    if (mask_[i]) out.push_back(static_cast<SiteIndex>(i));
  }
  return out;
}

std::vector<Coord> SiteSet::coords() const {
  std::vector<Coord> out;
  out.reserve(count_);
  for (auto s : indices()) out.push_back(window_.coord(s));
  return out;
}

bool SiteSet::is_subset_of(const SiteSet& other) const {
  if (!(window_ == other.window_)) throw DomainError("window mismatch");
  for (std::size_t i = 0; i < mask_.size(); ++i) {
    if (mask_[i] && !other.mask_[i]) return false;
  }
  return true;
}

bool SiteSet::operator==(const SiteSet& other) const {
  return window_ == other.window_ && mask_ == other.mask_;
}

std::vector<Coord> neighbors(const Coord& x, const Window& window) {
  if (!window.contains(x)) throw DomainError("site " + x.str() + " outside window");
  std::vector<Coord> out;
  out.reserve(static_cast<std::size_t>(window.directions()));
  for (int a = 0; a < window.dim(); ++a) {
    for (int sign : {+1, -1}) {
      Coord y = x;
      y[a] = x[a] + sign;
      if (window.contains(y)) out.push_back(y);
    }
  }
  return out;
}

SiteSet inner_boundary(const SiteSet& a) {
  const auto& w = a.window();
  SiteSet out(w);
  for (SiteIndex s = 0; s < w.size(); ++s) {
    if (!a.contains(s)) continue;
    for (int k = 0; k < w.directions(); ++k) {
      auto t = w.step(s, k);
      if (t != kNoSite && !a.contains(t)) {
        out.insert(s);
        break;
      }
    }
  }
  return out;
}

SiteSet outer_boundary(const SiteSet& a) {
  const auto& w = a.window();
  SiteSet out(w);
  for (SiteIndex s = 0; s < w.size(); ++s) {
    if (a.contains(s)) continue;
    for (int k = 0; k < w.directions(); ++k) {
      auto t = w.step(s, k);
      if (t != kNoSite && a.contains(t)) {
        out.insert(s);
        break;
      }
    }
  }
  return out;
}

std::vector<DirectedEdge> edge_boundary(const SiteSet& a) {
  const auto& w = a.window();
  std::vector<DirectedEdge> out;
  for (SiteIndex s = 0; s < w.size(); ++s) {
    if (!a.contains(s)) continue;
    for (int k = 0; k < w.directions(); ++k) {
      auto t = w.step(s, k);
      if (t != kNoSite && !a.contains(t)) out.push_back({s, t});
    }
  }
  return out;
}

bool bounding_box(std::span<const std::uint8_t> in_set, const Window& window, Box& out) {
  bool any = false;
  const int d = window.dim();
  for (int a = 0; a < d; ++a) {
    out.lo[static_cast<std::size_t>(a)] = window.radius();
    out.hi[static_cast<std::size_t>(a)] = -window.radius();
  }
  for (SiteIndex s = 0; s < window.size(); ++s) {
    if (!in_set[static_cast<std::size_t>(s)]) continue;
    any = true;
    SiteIndex r = s;
    for (int a = 0; a < d; ++a) {
      auto i = static_cast<std::size_t>(a);
      std::int64_t c = r % window.side() - window.radius();
      r /= window.side();
      out.lo[i] = std::min(out.lo[i], c);
      out.hi[i] = std::max(out.hi[i], c);
    }
  }
  return any;
}

std::vector<std::uint8_t> enclosed_mask(std::span<const std::uint8_t> in_set,
                                        const Window& window, const Box& bounds) {
  const int d = window.dim();
  const std::int64_t w = window.radius();
  std::vector<std::uint8_t> result(in_set.begin(), in_set.end());

  // Local grid over bounds grown by one (clipped), padded by one more cell
  // on every side. States: 0 free, 1 member, 2 reached or pad.
  std::array<std::int64_t, kMaxDim> glo{};
  std::array<std::int64_t, kMaxDim> ghi{};
  std::array<std::int64_t, kMaxDim> lside{};
  std::array<std::int64_t, kMaxDim> lstride{};
  std::int64_t n = 1;
  for (int a = 0; a < d; ++a) {
    auto i = static_cast<std::size_t>(a);
    glo[i] = std::max(bounds.lo[i] - 1, -w);
    ghi[i] = std::min(bounds.hi[i] + 1, w);
    if (glo[i] > ghi[i]) return result;
    lside[i] = ghi[i] - glo[i] + 3;
    lstride[i] = n;
    n *= lside[i];
  }
  std::vector<std::uint8_t> local(static_cast<std::size_t>(n), 2);
  std::vector<std::int64_t> queue;

  std::array<std::int64_t, kMaxDim> llo{};
  std::array<std::int64_t, kMaxDim> lhi{};
  for (int a = 0; a < d; ++a) {
    llo[static_cast<std::size_t>(a)] = 1;
    lhi[static_cast<std::size_t>(a)] = lside[static_cast<std::size_t>(a)] - 2;
  }
  for_each_in_box(d, llo, lhi, [&](const std::array<std::int64_t, kMaxDim>& x) {
    std::int64_t li = 0;
    SiteIndex gi = 0;
    bool touches_pad = false;
    for (int a = 0; a < d; ++a) {
      auto i = static_cast<std::size_t>(a);
      li += x[i] * lstride[i];
      gi += (x[i] - 1 + glo[i] + w) * window.stride(a);
      touches_pad = touches_pad || x[i] == 1 || x[i] == lhi[i];
    }
    if (in_set[static_cast<std::size_t>(gi)]) {
      local[static_cast<std::size_t>(li)] = 1;
    } else if (touches_pad) {
      local[static_cast<std::size_t>(li)] = 2;
      queue.push_back(li);
    } else {
      local[static_cast<std::size_t>(li)] = 0;
    }
  });

  while (!queue.empty()) {
    auto li = queue.back();
    queue.pop_back();
    for (int a = 0; a < d; ++a) {
      for (std::int64_t off : {lstride[static_cast<std::size_t>(a)], -lstride[static_cast<std::size_t>(a)]}) {
        auto& c = local[static_cast<std::size_t>(li + off)];
        if (c == 0) {
          c = 2;
          queue.push_back(li + off);
        }
      }
    }
  }

  for_each_in_box(d, llo, lhi, [&](const std::array<std::int64_t, kMaxDim>& x) {
    std::int64_t li = 0;
    SiteIndex gi = 0;
    for (int a = 0; a < d; ++a) {
      auto i = static_cast<std::size_t>(a);
      li += x[i] * lstride[i];
      gi += (x[i] - 1 + glo[i] + w) * window.stride(a);
    }
    if (local[static_cast<std::size_t>(li)] == 0) result[static_cast<std::size_t>(gi)] = 1;
  });
  return result;
}

SiteSet enclosed_region(const SiteSet& s) {
  Box box;
  if (!bounding_box(s.mask(), s.window(), box)) return SiteSet(s.window());
  return SiteSet(s.window(), enclosed_mask(s.mask(), s.window(), box));
}

std::int64_t inscribed_linf_radius(std::span<const std::uint8_t> in_set, const Window& window) {
  const int d = window.dim();
  const std::int64_t w = window.radius();
  if (!in_set[static_cast<std::size_t>(window.origin())]) return -1;
  for (std::int64_t r = 1; r <= w; ++r) {
    // faces of the shell at l-infinity radius r
    for (int a = 0; a < d; ++a) {
      for (std::int64_t fixed : {r, -r}) {
        std::array<std::int64_t, kMaxDim> lo{};
        std::array<std::int64_t, kMaxDim> hi{};
        for (int b = 0; b < d; ++b) {
          lo[static_cast<std::size_t>(b)] = b == a ? fixed : -r;
          hi[static_cast<std::size_t>(b)] = b == a ? fixed : r;
        }
        bool missing = false;
        for_each_in_box(d, lo, hi, [&](const std::array<std::int64_t, kMaxDim>& x) {
          if (missing) return;
          SiteIndex s = 0;
          for (int b = 0; b < d; ++b) s += (x[static_cast<std::size_t>(b)] + w) * window.stride(b);
          if (!in_set[static_cast<std::size_t>(s)]) missing = true;
        });
        if (missing) return r - 1;
      }
    }
  }
  return w;
}

}  // namespace latgrow

#pragma once

// Finite origin-centered windows of Z^d, site indexing, and the set
// operators (boundaries, enclosure) shared by every simulator.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace latgrow {

inline constexpr int kMaxDim = 6;

using SiteIndex = std::int64_t;
inline constexpr SiteIndex kNoSite = -1;

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Lattice point of Z^d. Arithmetic is overflow-checked.
class Coord {
 public:
  Coord() = default;
  explicit Coord(int dim);
  Coord(std::initializer_list<std::int64_t> components);

  int dim() const { return dim_; }
  std::int64_t operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  std::int64_t& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

  Coord operator+(const Coord& other) const;
  Coord operator-(const Coord& other) const;
  bool operator==(const Coord& other) const = default;

  std::int64_t linf() const;
  std::int64_t l1() const;
  double l2() const;

  std::string str() const;

 private:
  std::array<std::int64_t, kMaxDim> c_{};
  int dim_ = 0;
};

/// The box [-W, W]^d. Sites are indexed with axis 0 varying fastest.
/// Neighbor directions are ordered +e1, -e1, +e2, -e2, ...
class Window {
 public:
  Window(int dim, std::int64_t radius);

  int dim() const { return dim_; }
  std::int64_t radius() const { return radius_; }
  std::int64_t side() const { return side_; }
  SiteIndex size() const { return size_; }
  int directions() const { return 2 * dim_; }
  SiteIndex origin() const { return origin_; }
  std::int64_t stride(int axis) const { return stride_[static_cast<std::size_t>(axis)]; }

  bool contains(const Coord& x) const;
  SiteIndex index(const Coord& x) const;
  Coord coord(SiteIndex s) const;
  std::int64_t axis_coord(SiteIndex s, int axis) const {
    return (s / stride_[static_cast<std::size_t>(axis)]) % side_ - radius_;
  }
  std::int64_t linf_radius(SiteIndex s) const;

  /// Neighbor of `s` in direction `k`, or kNoSite if it leaves the window.
  SiteIndex step(SiteIndex s, int k) const {
    return ((*border_)[static_cast<std::size_t>(s)] >> k & 1U) != 0U
               ? kNoSite
               : s + offset_[static_cast<std::size_t>(k)];
  }

  static int reverse(int k) { return k ^ 1; }

  bool operator==(const Window& other) const {
    return dim_ == other.dim_ && radius_ == other.radius_;
  }

 private:
  int dim_;
  std::int64_t radius_;
  std::int64_t side_;
  SiteIndex size_;
  SiteIndex origin_;
  std::array<std::int64_t, kMaxDim> stride_{};
  std::array<std::int64_t, 2 * kMaxDim> offset_{};
  // bit k set when direction k leaves the window
  std::shared_ptr<const std::vector<std::uint16_t>> border_;
};

/// Dense membership set over a window.
class SiteSet {
 public:
  explicit SiteSet(Window window);
  SiteSet(Window window, std::vector<std::uint8_t> mask);

  const Window& window() const { return window_; }
  bool contains(SiteIndex s) const { return mask_[static_cast<std::size_t>(s)] != 0; }
  bool contains(const Coord& x) const;
  void insert(SiteIndex s);
  void insert(const Coord& x);
  void erase(SiteIndex s);
  std::size_t count() const { return count_; }
  bool empty() const { return count_ == 0; }

  std::vector<SiteIndex> indices() const;
  std::vector<Coord> coords() const;
  std::span<const std::uint8_t> mask() const { return mask_; }

  bool is_subset_of(const SiteSet& other) const;
  bool operator==(const SiteSet& other) const;

 private:
  Window window_;
  std::vector<std::uint8_t> mask_;
  std::size_t count_ = 0;
};

struct DirectedEdge {
  SiteIndex from;
  SiteIndex to;
  bool operator==(const DirectedEdge&) const = default;
};

/// Axis-aligned box of lattice coordinates, inclusive bounds.
struct Box {
  std::array<std::int64_t, kMaxDim> lo{};
  std::array<std::int64_t, kMaxDim> hi{};
};

std::vector<Coord> neighbors(const Coord& x, const Window& window);

SiteSet inner_boundary(const SiteSet& a);
SiteSet outer_boundary(const SiteSet& a);
std::vector<DirectedEdge> edge_boundary(const SiteSet& a);

/// S together with every site that S separates from the window boundary.
SiteSet enclosed_region(const SiteSet& s);

/// Same as enclosed_region, on a raw membership mask, with the flood fill
/// confined to `bounds` grown by one site. Every member of the mask must lie
/// inside `bounds`.
std::vector<std::uint8_t> enclosed_mask(std::span<const std::uint8_t> in_set,
                                        const Window& window, const Box& bounds);

/// Tight bounding box of the set bits of a mask; nullopt-like empty flag.
bool bounding_box(std::span<const std::uint8_t> in_set, const Window& window, Box& out);

/// Largest R with [-R, R]^d inside the mask, or -1 when the origin is missing.
std::int64_t inscribed_linf_radius(std::span<const std::uint8_t> in_set, const Window& window);

}  // namespace latgrow

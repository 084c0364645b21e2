#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace latgrow {

/// Exact nonnegative-friendly rational in lowest terms, denominator > 0.
/// Arithmetic throws std::overflow_error instead of wrapping.
class RationalTime {
 public:
  RationalTime() = default;
  RationalTime(std::int64_t num, std::int64_t den = 1);

  /// Accepts "n/d" or an integer "n"; anything with a decimal point or
  /// exponent is rejected so that float inputs never sneak in.
  static RationalTime parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  RationalTime operator+(const RationalTime& o) const;
  RationalTime operator-(const RationalTime& o) const;
  RationalTime operator*(const RationalTime& o) const;
  RationalTime operator/(const RationalTime& o) const;

  bool operator==(const RationalTime& o) const = default;
  std::strong_ordering operator<=>(const RationalTime& o) const;

  std::int64_t floor() const;
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

 private:
  static RationalTime from_wide(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace latgrow

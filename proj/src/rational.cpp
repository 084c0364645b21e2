#include "latgrow/rational.hpp"

#include <charconv>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "latgrow/lattice.hpp"

namespace latgrow {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw DomainError("not an exact rational: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

RationalTime::RationalTime(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("zero denominator");
  *this = from_wide(num, den);
}

RationalTime RationalTime::from_wide(__int128 num, __int128 den) {
  if (den == 0) throw DomainError("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  constexpr auto lo = static_cast<__int128>(std::numeric_limits<std::int64_t>::min());
  constexpr auto hi = static_cast<__int128>(std::numeric_limits<std::int64_t>::max());
  if (num < lo || num > hi || den > hi) throw std::overflow_error("rational time overflow");
  RationalTime r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

RationalTime RationalTime::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return RationalTime(parse_int(text), 1);
  return RationalTime(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

RationalTime RationalTime::operator+(const RationalTime& o) const {
  return from_wide(static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_,
                   static_cast<__int128>(den_) * o.den_);
}

RationalTime RationalTime::operator-(const RationalTime& o) const {
  return from_wide(static_cast<__int128>(num_) * o.den_ - static_cast<__int128>(o.num_) * den_,
                   static_cast<__int128>(den_) * o.den_);
}

RationalTime RationalTime::operator*(const RationalTime& o) const {
  return from_wide(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_);
}

RationalTime RationalTime::operator/(const RationalTime& o) const {
  if (o.num_ == 0) throw DomainError("division by zero");
  return from_wide(static_cast<__int128>(num_) * o.den_, static_cast<__int128>(den_) * o.num_);
}

std::strong_ordering RationalTime::operator<=>(const RationalTime& o) const {
  return static_cast<__int128>(num_) * o.den_ <=> static_cast<__int128>(o.num_) * den_;
}

std::int64_t RationalTime::floor() const {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return q;
}

std::string RationalTime::str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

}  // namespace latgrow

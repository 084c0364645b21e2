#include "latgrow/rng.hpp"

#include <cmath>
#include <limits>

namespace latgrow {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::mt19937_64 make_engine(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t k = splitmix64(a ^ splitmix64(b ^ splitmix64(c)));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32),
                    static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

std::uint64_t hash_purpose(std::string_view purpose) {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : purpose) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t run_id, std::string_view purpose)
    : master_seed_(master_seed),
      run_id_(run_id),
      lineage_(hash_purpose(purpose)),
      engine_(make_engine(master_seed, run_id, lineage_)) {}

RngStream RngStream::derive(std::string_view sub_purpose) const {
  RngStream child = *this;
  child.lineage_ = splitmix64(lineage_ ^ hash_purpose(sub_purpose));
  child.engine_ = make_engine(master_seed_, run_id_, child.lineage_);
  return child;
}

std::uint64_t RngStream::below(std::uint64_t n) {
  if (n == 0) throw DomainError("below(0)");
  // rejection on the top of the range keeps every residue equally likely
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

double exponential_from_uniform(double u, double rate) {
  if (!(rate > 0.0)) throw DomainError("exponential rate must be positive");
  if (!(u > 0.0 && u < 1.0)) throw DomainError("uniform draw must lie in (0,1)");
  return -std::log(u) / rate;
}

double sample_exponential(double rate, RngStream& stream) {
  if (!(rate > 0.0)) throw DomainError("exponential rate must be positive");
  return -std::log(stream.uniform01()) / rate;
}

std::uint64_t sample_geometric_value(double mu, RngStream& stream) {
  if (!(mu > 0.0 && mu <= 1.0)) throw DomainError("geometric parameter must lie in (0,1]");
  // P(floor(ln U / ln(1-mu)) >= i) = (1-mu)^i; mu = 1 divides by -inf and gives 0
  double v = std::floor(std::log(stream.uniform01()) / std::log1p(-mu));
  if (v >= 1e18) return static_cast<std::uint64_t>(1e18);
  return static_cast<std::uint64_t>(v);
}

SiteSet sample_bernoulli_field(double p, const Window& window, bool exclude_origin,
                               RngStream& stream) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("probability must lie in [0,1]");
  SiteSet out(window);
  for (SiteIndex s = 0; s < window.size(); ++s) {
    bool take = stream.bernoulli(p);
    if (take && !(exclude_origin && s == window.origin())) out.insert(s);
  }
  return out;
}

}  // namespace latgrow

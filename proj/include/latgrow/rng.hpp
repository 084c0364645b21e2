#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "latgrow/lattice.hpp"

namespace latgrow {

/// Reproducible random stream identified by (master seed, run id, purpose).
///
/// Draw conversions are written out by hand rather than taken from the
/// <random> distributions, whose output is implementation-defined; the
/// engine itself (mt19937_64) is fully specified by the standard, so a given
/// lineage yields the same draws on every platform.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t run_id, std::string_view purpose);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t run_id() const { return run_id_; }

  /// Child stream with an extended lineage; does not consume draws.
  RngStream derive(std::string_view sub_purpose) const;

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n), unbiased.
  std::uint64_t below(std::uint64_t n);

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t run_id_;
  std::uint64_t lineage_;
  std::mt19937_64 engine_;
};

std::uint64_t hash_purpose(std::string_view purpose);

/// -ln(u) / rate. Exposed for testing the inverse CDF directly.
double exponential_from_uniform(double u, double rate);

double sample_exponential(double rate, RngStream& stream);

/// Value i >= 0 with probability (1 - mu)^i mu.
std::uint64_t sample_geometric_value(double mu, RngStream& stream);

/// Each site included independently with probability p.
SiteSet sample_bernoulli_field(double p, const Window& window, bool exclude_origin,
                               RngStream& stream);

}  // namespace latgrow

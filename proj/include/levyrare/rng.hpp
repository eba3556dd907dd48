#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace levyrare {

/// Deterministic generator handle keyed by (master seed, stream id).
///
/// Every replication owns exactly one handle; sub-draws consume it
/// sequentially. Handles are cheap to construct and must not be shared
/// between threads.
class Rng {
 public:
  Rng(std::uint64_t master_seed, std::uint64_t stream_id)
      : engine_(make_seed(master_seed, stream_id)) {}

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() {
    for (;;) {
      const double u =
          static_cast<double>(engine_() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

  /// Uniform on (lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() { return normal_(engine_); }
  double normal(double mean, double sd) { return mean + sd * normal_(engine_); }

  double exponential() { return -std::log(uniform()); }

  std::uint64_t poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    std::poisson_distribution<std::uint64_t> dist(mean);
    return dist(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

  /// Mixes a 64-bit word (splitmix64 finalizer).
  static constexpr std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

 private:
  static std::mt19937_64 make_seed(std::uint64_t seed, std::uint64_t stream) {
    const std::uint64_t a = mix(seed);
    const std::uint64_t b = mix(stream ^ 0x6a09e667f3bcc909ULL);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
  }

  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace levyrare

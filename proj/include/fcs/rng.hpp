#pragma once

#include <cstdint>

#include "fcs/special.hpp"

namespace fcs {

/// Counter-based pseudo-random stream (SplitMix64 finalizer applied to a
/// per-draw counter). Streams are a pure function of (seed, stream, counter),
/// so replications can be split by index without any shared state, and the
/// draw sequence is identical on every platform.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : base_(mix(seed + 0x9E3779B97F4A7C15ULL * (stream + 1))) {}

  std::uint64_t next_u64() { return mix(base_ + 0x9E3779B97F4A7C15ULL * ++counter_); }

  /// Uniform on the open interval (0, 1); never returns an endpoint.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via the inverse CDF (no Box-Muller, no rejection).
  double next_normal() { return normal_quantile(next_uniform()); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

}  // namespace fcs

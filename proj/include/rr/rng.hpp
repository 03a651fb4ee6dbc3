#pragma once

#include <cstdint>
#include <random>

namespace rr {

/// Seeded pseudorandom source. One instance drives one attack; per-copy
/// substreams are derived from the construction seed so they are independent
/// of how much the parent has been consumed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Uniform index in {0, ..., n-1}; n must be >= 1. Unbiased.
  std::size_t uniform_index(std::size_t n);

  /// Deterministic child stream keyed by (construction seed, stream id).
  Rng substream(std::uint64_t stream) const;

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used for seed derivation.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace rr

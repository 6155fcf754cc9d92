#pragma once

#include <cstdint>
#include <vector>

#include "odl1/types.hpp"

namespace odl1 {

// Deterministic 64-bit-seeded generator: xoshiro256++ with splitmix64 state
// expansion, Gaussians via Box-Muller. The algorithm is fixed forever so that
// identical seeds reproduce identical experiments across runs and platforms.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t position() const { return position_; }

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform();

  // Standard normal N(0, 1).
  double normal();

  // Circularly symmetric complex normal, total variance 1
  // (real and imaginary parts independent N(0, 1/2)).
  Scalar normal_complex();

  // +1 or -1 with equal probability.
  double sign();

  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  // k distinct indices from {0, ..., n-1}, uniform without replacement.
  std::vector<Index> sample_without_replacement(Index n, Index k);

 private:
  std::uint64_t seed_;
  std::uint64_t position_ = 0;
  std::uint64_t state_[4];
};

}  // namespace odl1

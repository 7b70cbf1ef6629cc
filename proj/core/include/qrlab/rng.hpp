#pragma once

#include <cstddef>
#include <cstdint>

#include "qrlab/linalg.hpp"

namespace qrlab {

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Derives an independent key for a numbered sub-stream of a seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Counter-based generator: the k-th draw is mix64(key + k * golden), so any
// stream can be reproduced from (seed, stream) alone, regardless of which
// worker consumes it.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  // Standard normal via Box-Muller (cosine branch only).
  double normal();
  // Uniform direction on the unit sphere S^{n-1}.
  Vec unit_vector(std::size_t n);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace qrlab

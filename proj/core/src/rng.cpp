#include "qrlab/rng.hpp"

#include <cmath>
#include <numbers>

namespace qrlab {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed + kGolden) ^ mix64(stream * 0xd1b54a32d192ed03ULL + 1));
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(derive_seed(seed, stream)) {}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double CounterRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double CounterRng::normal() {
  // 1 - u keeps the logarithm argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Vec CounterRng::unit_vector(std::size_t n) {
  Vec v(n);
  for (;;) {
    double sq = 0.0;
    for (double& x : v) {
      x = normal();
      sq += x * x;
    }
    if (sq > 1e-300) {
      const double inv = 1.0 / std::sqrt(sq);
      for (double& x : v) x *= inv;
      return v;
    }
  }
}

}  // namespace qrlab

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "qrlab/differential.hpp"
#include "qrlab/distortion_pair.hpp"
#include "qrlab/mapping.hpp"

namespace qrlab {

// a = |J(x, f)|, b = |Df(x)|^n at `point`.
struct DistortionSample {
  double a = 0.0;
  double b = 0.0;
  Vec point;
  double jacobian_signed = 0.0;
};

DistortionSample make_distortion_sample(const DifferentialSample& d);

// b - K1 a - K2; <= 0 when the inequality holds at the sample.
double distortion_residual(const DistortionSample& s, const DistortionPair& p);

struct SignVerdict {
  double tau = 0.0;  // 1e-9 * max |J| over the sample
  std::size_t positive = 0;
  std::size_t negative = 0;
  bool consistent = true;
};

SignVerdict jacobian_sign_verdict(std::span<const DistortionSample> samples);

struct DistortionVerification {
  DistortionPair pair{1.0, 0.0};
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
  double max_residual = -std::numeric_limits<double>::infinity();
  double tolerance = 0.0;  // per-point violation threshold
  double violation_fraction = 0.0;
  SignVerdict sign;
  Vec worst_point;
  std::vector<DistortionSample> samples;

  bool inequality_holds() const { return violation_fraction == 0.0; }
  bool pass() const { return inequality_holds() && sign.consistent; }
};

// Seeded, uniform sampling of `region` away from singular points. A point
// violates when its residual exceeds 1e-9 * max(1, b).
DistortionVerification verify_distortion(const MappingSpec& map, const DomainRegion& region,
                                         const DistortionPair& pair, std::size_t sample_count,
                                         std::uint64_t seed,
                                         const DifferentialOptions& options = {});

// Seeded differential samples from a mapping (used by verify and fit).
std::vector<DistortionSample> draw_distortion_samples(const MappingSpec& map,
                                                      const DomainRegion& region,
                                                      std::size_t count, std::uint64_t seed,
                                                      const DifferentialOptions& options = {});

// Minimal K2 as a function of K1:
//   K2*(K1) = max(0, max_i (b_i - K1 a_i)),
// a convex, nonincreasing, piecewise-linear upper envelope.
class DistortionFrontier {
 public:
  struct Piece {
    double k1_begin = 0.0;
    double k1_end = std::numeric_limits<double>::infinity();
    double intercept = 0.0;  // b
    double slope_a = 0.0;    // value is intercept - slope_a * K1
    long sample = -1;        // contributing sample, -1 for the zero clamp
  };

  struct Breakpoint {
    double k1 = 0.0;
    double k2 = 0.0;
  };

  explicit DistortionFrontier(std::vector<Piece> pieces);

  double minimal_k2(double k1) const;
  // Smallest K1 > 0 (infimum) with K2*(K1) <= k2; +inf when infeasible.
  double minimal_k1(double k2) const;

  const std::vector<Piece>& pieces() const { return pieces_; }
  // (0, K2*(0)) followed by every kink.
  std::vector<Breakpoint> breakpoints() const;
  std::vector<long> contributing_samples() const;

 private:
  std::vector<Piece> pieces_;
};

// Upper-envelope sweep over lines sorted by slope. Throws InvalidArgument
// on an empty sample list.
DistortionFrontier fit_minimal_distortion(std::span<const DistortionSample> samples);

}  // namespace qrlab

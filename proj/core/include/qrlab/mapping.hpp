#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qrlab/distortion_pair.hpp"
#include "qrlab/domain.hpp"
#include "qrlab/linalg.hpp"

namespace qrlab {

using PointMap = std::function<Vec(std::span<const double>)>;
using DifferentialMap = std::function<SquareMatrix(std::span<const double>)>;
using ParamMap = std::map<std::string, double>;

// Samplers never draw points closer than this to a declared singular point.
inline constexpr double kSingularExclusion = 1e-6;

// An evaluable mapping f: Omega -> R^n with optional closed-form
// differential and declared metadata. Immutable after construction.
struct MappingSpec {
  std::string name;
  std::size_t n = 0;
  DomainRegion domain = DomainRegion::ball(Vec{0.0, 0.0}, 1.0);
  PointMap evaluate;
  DifferentialMap exact_differential;  // empty when unknown
  std::optional<DistortionPair> declared_distortion;
  std::optional<double> declared_holder;
  std::vector<Vec> singular_points;
  ParamMap params;

  bool has_exact_differential() const { return static_cast<bool>(exact_differential); }

  // Evaluates f and rejects non-finite output.
  Vec operator()(std::span<const double> x) const;

  // Distance to the nearest singular point, +inf when there are none.
  double singular_distance(std::span<const double> x) const;
};

// Copy of `map` with its domain replaced. Throws InvalidArgument on a
// dimension mismatch.
MappingSpec with_domain(MappingSpec map, DomainRegion domain);

// Uniform sample of map.domain outside the singular exclusion balls.
// Throws Error after `max_attempts` rejections.
Vec sample_regular_point(const MappingSpec& map, const DomainRegion& region,
                         CounterRng& rng, int max_attempts = 1000);

}  // namespace qrlab

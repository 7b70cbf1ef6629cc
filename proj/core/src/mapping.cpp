#include "qrlab/mapping.hpp"

#include <cmath>
#include <limits>

#include "qrlab/error.hpp"

namespace qrlab {

DistortionPair::DistortionPair(double k1, double k2) : k1_(k1), k2_(k2) {
  if (!(k1 > 0.0) || !std::isfinite(k1))
    throw InvalidArgument("distortion pair requires 0 < K1 < inf");
  if (!(k2 >= 0.0) || !std::isfinite(k2))
    throw InvalidArgument("distortion pair requires 0 <= K2 < inf");
}

Vec MappingSpec::operator()(std::span<const double> x) const {
  if (x.size() != n) throw InvalidArgument("point dimension does not match mapping '" + name + "'");
  Vec y = evaluate(x);
  if (y.size() != n || !all_finite(y))
    throw NumericalError("mapping '" + name + "' returned a non-finite value");
  return y;
}

double MappingSpec::singular_distance(std::span<const double> x) const {
  double d = std::numeric_limits<double>::infinity();
  for (const Vec& s : singular_points) d = std::min(d, distance(x, s));
  return d;
}

MappingSpec with_domain(MappingSpec map, DomainRegion domain) {
  if (domain.dim() != map.n) throw InvalidArgument("domain dimension does not match mapping");
  map.domain = std::move(domain);
  return map;
}

Vec sample_regular_point(const MappingSpec& map, const DomainRegion& region, CounterRng& rng,
                         int max_attempts) {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Vec x = region.sample_uniform(rng);
    if (map.singular_distance(x) > kSingularExclusion && map.domain.contains(x)) return x;
  }
  throw Error("could not draw a regular point from the region");
}

}  // namespace qrlab

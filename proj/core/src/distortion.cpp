#include "qrlab/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qrlab/error.hpp"
#include "qrlab/rng.hpp"

namespace qrlab {

DistortionSample make_distortion_sample(const DifferentialSample& d) {
  DistortionSample s;
  s.a = std::abs(d.jacobian);
  s.b = std::pow(d.op_norm, static_cast<double>(d.matrix.dim()));
  s.point = d.point;
  s.jacobian_signed = d.jacobian;
  return s;
}

double distortion_residual(const DistortionSample& s, const DistortionPair& p) {
  return s.b - p.k1() * s.a - p.k2();
}

SignVerdict jacobian_sign_verdict(std::span<const DistortionSample> samples) {
  SignVerdict v;
  double max_abs = 0.0;
  for (const auto& s : samples) max_abs = std::max(max_abs, std::abs(s.jacobian_signed));
  v.tau = 1e-9 * max_abs;
  for (const auto& s : samples) {
    if (s.jacobian_signed > v.tau) ++v.positive;
    if (s.jacobian_signed < -v.tau) ++v.negative;
  }
  v.consistent = v.positive == 0 || v.negative == 0;
  return v;
}

std::vector<DistortionSample> draw_distortion_samples(const MappingSpec& map, const DomainRegion& region,
                                                      std::size_t count, std::uint64_t seed,
                                                      const DifferentialOptions& options) {
  if (region.dim() != map.n) throw InvalidArgument("sampling region dimension does not match mapping");
  std::vector<DistortionSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    CounterRng rng(seed, i);
    const Vec x = sample_regular_point(map, region, rng);
    out.push_back(make_distortion_sample(sample_differential(map, x, options)));
  }
  return out;
}

DistortionVerification verify_distortion(const MappingSpec& map, const DomainRegion& region,
                                         const DistortionPair& pair, std::size_t sample_count,
                                         std::uint64_t seed, const DifferentialOptions& options) {
  if (sample_count < 1) throw InvalidArgument("verify_distortion needs at least one sample");
  DistortionVerification out;
  out.pair = pair;
  out.sample_count = sample_count;
  out.seed = seed;
  out.samples = draw_distortion_samples(map, region, sample_count, seed, options);
  std::size_t violations = 0;
  for (const auto& s : out.samples) {
    const double r = distortion_residual(s, pair);
    if (r > out.max_residual) {
      out.max_residual = r;
      out.worst_point = s.point;
    }
    const double tol = 1e-9 * std::max(1.0, s.b);
    out.tolerance = std::max(out.tolerance, tol);
    if (r > tol) ++violations;
  }
  out.violation_fraction = static_cast<double>(violations) / static_cast<double>(sample_count);
  out.sign = jacobian_sign_verdict(out.samples);
  return out;
}

DistortionFrontier::DistortionFrontier(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw InvalidArgument("frontier needs at least one piece");
}

double DistortionFrontier::minimal_k2(double k1) const {
  if (!(k1 >= 0.0)) throw InvalidArgument("minimal_k2 requires K1 >= 0");
  const auto it = std::upper_bound(pieces_.begin(), pieces_.end(), k1,
                                   [](double k, const Piece& p) { return k < p.k1_end; });
  const std::size_t idx = it == pieces_.end() ? pieces_.size() - 1 : static_cast<std::size_t>(it - pieces_.begin());
  // Neighbouring pieces guard against breakpoints perturbed by roundoff.
  double best = 0.0;
  for (std::size_t j = idx == 0 ? 0 : idx - 1; j <= std::min(idx + 1, pieces_.size() - 1); ++j)
    best = std::max(best, pieces_[j].intercept - pieces_[j].slope_a * k1);
  return best;
}

double DistortionFrontier::minimal_k1(double k2) const {
  if (!(k2 >= 0.0)) throw InvalidArgument("minimal_k1 requires K2 >= 0");
  const Piece& last = pieces_.back();
  if (k2 < last.intercept) return std::numeric_limits<double>::infinity();
  auto value_at_end = [](const Piece& p) {
    return std::isinf(p.k1_end) ? p.intercept : p.intercept - p.slope_a * p.k1_end;
  };
  const Piece& first = pieces_.front();
  if (first.intercept - first.slope_a * first.k1_begin <= k2) return 0.0;
  // First piece whose right end is already at or below k2; the envelope is
  // nonincreasing, so a binary search applies.
  std::size_t lo = 0, hi = pieces_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (value_at_end(pieces_[mid]) <= k2) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  const Piece& p = pieces_[lo];
  if (p.slope_a == 0.0) return p.k1_begin;
  const double k1 = (p.intercept - k2) / p.slope_a;
  return std::clamp(k1, p.k1_begin, p.k1_end);
}

std::vector<DistortionFrontier::Breakpoint> DistortionFrontier::breakpoints() const {
  std::vector<Breakpoint> out;
  out.push_back({0.0, minimal_k2(0.0)});
  for (std::size_t j = 0; j + 1 < pieces_.size(); ++j) {
    const double k = pieces_[j].k1_end;
    out.push_back({k, std::max(0.0, pieces_[j].intercept - pieces_[j].slope_a * k)});
  }
  return out;
}

std::vector<long> DistortionFrontier::contributing_samples() const {
  std::vector<long> out;
  out.reserve(pieces_.size());
  for (const auto& p : pieces_) out.push_back(p.sample);
  return out;
}

DistortionFrontier fit_minimal_distortion(std::span<const DistortionSample> samples) {
  if (samples.empty()) throw InvalidArgument("fit_minimal_distortion needs at least one sample");
  struct Line {
    long double a;  // value = b - a K
    long double b;
    long sample;
  };
  std::vector<Line> lines;
  lines.reserve(samples.size() + 1);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].a >= 0.0) || !(samples[i].b >= 0.0) || !std::isfinite(samples[i].a) ||
        !std::isfinite(samples[i].b))
      throw InvalidArgument("distortion samples need finite a, b >= 0");
    lines.push_back({samples[i].a, samples[i].b, static_cast<long>(i)});
  }
  lines.push_back({0.0L, 0.0L, -1});  // clamp K2 >= 0

  // Increasing slope (-a) means decreasing a; equal slopes keep the larger
  // intercept, and on a full tie the sample wins over the clamp.
  std::sort(lines.begin(), lines.end(), [](const Line& x, const Line& y) {
    if (x.a != y.a) return x.a > y.a;
    if (x.b != y.b) return x.b > y.b;
    return x.sample > y.sample;
  });
  std::vector<Line> unique;
  for (const Line& l : lines)
    if (unique.empty() || unique.back().a != l.a) unique.push_back(l);

  // Line j is unnecessary when the intersection of i and k is left of (or
  // at) the intersection of i and j.
  auto intersect = [](const Line& p, const Line& q) { return (p.b - q.b) / (p.a - q.a); };
  std::vector<Line> hull;
  for (const Line& l : unique) {
    while (hull.size() >= 2) {
      const Line& i = hull[hull.size() - 2];
      const Line& j = hull.back();
      if (intersect(i, l) <= intersect(i, j)) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(l);
  }

  std::vector<DistortionFrontier::Piece> pieces;
  double begin = 0.0;
  for (std::size_t j = 0; j < hull.size(); ++j) {
    const double end = j + 1 < hull.size() ? static_cast<double>(intersect(hull[j], hull[j + 1]))
                                           : std::numeric_limits<double>::infinity();
    if (end <= 0.0) continue;
    // Nearly concurrent lines leave slivers at roundoff scale; fold them
    // into the neighbouring piece.
    if (end - begin <= 1e-12 * std::max(1.0, begin)) {
      if (!pieces.empty()) {
        pieces.back().k1_end = end;
        begin = end;
      }
      continue;
    }
    DistortionFrontier::Piece p;
    p.k1_begin = begin;
    p.k1_end = end;
    p.intercept = static_cast<double>(hull[j].b);
    p.slope_a = static_cast<double>(hull[j].a);
    p.sample = hull[j].sample;
    pieces.push_back(p);
    begin = end;
  }
  return DistortionFrontier(std::move(pieces));
}

}  // namespace qrlab

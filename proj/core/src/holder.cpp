#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#include "qrlab/error.hpp"
#include "qrlab/regularity.hpp"
#include "qrlab/rng.hpp"

namespace qrlab {

namespace {

struct PointPair {
  Vec x;
  Vec y;
};

std::vector<Vec> anchors_in(const MappingSpec& map, const DomainRegion& compact) {
  std::vector<Vec> out;
  for (const Vec& s : map.singular_points)
    if (compact.contains(s)) out.push_back(s);
  return out;
}

// Draws a pair at separation `sep` inside `compact`. Anchored pairs start
// at (or within `sep` of) a singular point, where the increments are
// largest for maps like the radial stretch.
std::optional<PointPair> draw_pair(const DomainRegion& compact, const Vec* anchor, bool exact_anchor,
                                   double sep, CounterRng& rng) {
  const std::size_t n = compact.dim();
  for (int attempt = 0; attempt < 64; ++attempt) {
    PointPair p;
    if (anchor != nullptr) {
      p.x = *anchor;
      if (!exact_anchor) {
        const Vec u = rng.unit_vector(n);
        const double offset = sep * rng.uniform();
        for (std::size_t i = 0; i < n; ++i) p.x[i] += offset * u[i];
      }
    } else {
      p.x = compact.sample_uniform(rng);
    }
    const Vec u = rng.unit_vector(n);
    p.y = p.x;
    for (std::size_t i = 0; i < n; ++i) p.y[i] += sep * u[i];
    if (compact.contains(p.x) && compact.contains(p.y)) return p;
  }
  return std::nullopt;
}

double increment(const MappingSpec& map, const PointPair& p) { return distance(map(p.x), map(p.y)); }

}  // namespace

HolderEstimate estimate_holder(const MappingSpec& map, const DomainRegion& compact,
                               const HolderOptions& options) {
  if (compact.dim() != map.n) throw InvalidArgument("compact set dimension does not match mapping");
  if (options.pair_count < 100) throw InvalidArgument("estimate_holder needs at least 100 pairs");
  if (options.bins < 2) throw InvalidArgument("estimate_holder needs at least two bins");
  if (options.alpha && !(*options.alpha > 0.0 && *options.alpha <= 1.0))
    throw InvalidArgument("fixed Hoelder exponent must lie in (0, 1]");

  HolderEstimate est;
  est.compact_set = compact;
  est.d = inset_distance(compact, map.domain);
  const double delta = options.delta.value_or(2.0 * est.d / 3.0);
  est.gamma = std::min(delta, est.d) / 3.0;
  const double sep_lo = 1e-3 * est.d;
  const double sep_hi = compact.diameter();
  if (!(sep_hi > sep_lo)) throw InvalidArgument("compact set is degenerate");

  const auto edges = log_spaced(sep_lo, sep_hi, options.bins + 1);
  est.bins.resize(options.bins);
  for (std::size_t b = 0; b < options.bins; ++b) {
    est.bins[b].sep_lo = edges[b];
    est.bins[b].sep_hi = edges[b + 1];
  }
  const std::vector<Vec> anchors = anchors_in(map, compact);

  std::vector<std::pair<double, double>> samples;  // (separation, increment)
  samples.reserve(options.pair_count);
  for (std::size_t i = 0; i < options.pair_count; ++i) {
    const std::size_t b = i % options.bins;
    const std::size_t round = i / options.bins;
    CounterRng rng(options.seed, i);
    const double sep = std::exp(rng.uniform(std::log(edges[b]), std::log(edges[b + 1])));
    const bool anchored = !anchors.empty() && round % 2 == 1;
    const Vec* anchor = anchored ? &anchors[(round / 2) % anchors.size()] : nullptr;
    const bool exact_anchor = anchored && (round / 2) % 4 == 0;
    const auto pair = draw_pair(compact, anchor, exact_anchor, sep, rng);
    if (!pair) {
      ++est.skipped_pairs;
      continue;
    }
    const double s = distance(pair->x, pair->y);
    const double inc = increment(map, *pair);
    samples.emplace_back(s, inc);
    HolderBin& bin = est.bins[b];
    ++bin.pairs;
    if (inc > bin.max_increment) {
      bin.max_increment = inc;
      bin.sep_at_max = s;
    }
  }
  est.pair_count = samples.size();

  // Regress over the small-gap regime; fall back to every populated bin
  // when fewer than three bins sit below gamma.
  auto usable = [](const HolderBin& bin) { return bin.pairs > 0 && bin.max_increment > 0.0; };
  std::size_t below = 0;
  for (const HolderBin& bin : est.bins)
    if (usable(bin) && bin.sep_hi <= est.gamma) ++below;
  for (HolderBin& bin : est.bins)
    bin.in_regression = usable(bin) && (below < 3 || bin.sep_hi <= est.gamma);

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t m = 0;
  for (const HolderBin& bin : est.bins) {
    if (!bin.in_regression) continue;
    const double lx = std::log(bin.sep_at_max), ly = std::log(bin.max_increment);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  const double denom = static_cast<double>(m) * sxx - sx * sx;
  if (m >= 2 && denom > 0.0) {
    est.alpha_hat = (static_cast<double>(m) * sxy - sx * sy) / denom;
  } else {
    est.alpha_hat = std::numeric_limits<double>::quiet_NaN();
  }
  est.flagged = !(est.alpha_hat > 0.0 && est.alpha_hat < 1.5);

  if (options.alpha) {
    est.alpha_used = *options.alpha;
  } else {
    est.alpha_used = std::isfinite(est.alpha_hat) ? std::clamp(est.alpha_hat, 1e-3, 1.0) : 1.0;
  }
  for (const auto& [s, inc] : samples) {
    if (s <= 0.0) continue;
    const double h = inc / std::pow(s, est.alpha_used);
    est.L_hat = std::max(est.L_hat, h);
    if (s < est.gamma) {
      est.L_hat_G = std::max(est.L_hat_G, h);
    } else {
      est.L_hat_H = std::max(est.L_hat_H, h);
    }
  }
  return est;
}

EquicontinuityReport equicontinuity_check(std::span<const MappingSpec> family, const DomainRegion& compact,
                                          double energy_bound, std::span<const double> scales,
                                          const EquicontinuityOptions& options) {
  if (family.empty()) throw InvalidArgument("equicontinuity_check needs a non-empty family");
  if (scales.empty()) throw InvalidArgument("equicontinuity_check needs scales");
  if (!(energy_bound > 0.0)) throw InvalidArgument("energy bound must be positive");
  for (std::size_t k = 1; k < scales.size(); ++k)
    if (!(scales[k] < scales[k - 1])) throw InvalidArgument("scales must be strictly decreasing");

  EquicontinuityReport rep;
  rep.energy_bound = energy_bound;
  rep.alpha_min = 1.0;
  std::vector<const MappingSpec*> admitted;
  for (const MappingSpec& member : family) {
    if (member.n != compact.dim()) throw InvalidArgument("family member dimension does not match V");
    if (!member.declared_distortion)
      throw InvalidArgument("family member '" + member.name + "' has no declared distortion pair");
    const double d = inset_distance(compact, member.domain);
    const QuadratureResult energy = domain_energy(member, options.profile);
    rep.member_energies.push_back(energy.value);
    if (energy.value - energy.error_estimate > energy_bound) {
      rep.refused_members.push_back(member.name);
      continue;
    }
    const DistortionPair& pair = *member.declared_distortion;
    const HolderPrediction pred = predicted_exponent(pair);
    const double alpha = pred.exponent(options.any_below_one_alpha);
    GrowthInputs in;
    in.k1 = pair.k1();
    in.k2 = pair.k2();
    in.energy = energy_bound;
    in.d = d;
    in.n = member.n;
    if (pred.cls == HolderClass::any_below_one) in.target_alpha = alpha;
    const GrowthBound gb = growth_bound(in);
    rep.alpha_min = std::min(rep.alpha_min, alpha);
    rep.L_shared = std::max(rep.L_shared, std::pow(gb.C, 1.0 / static_cast<double>(member.n)));
    admitted.push_back(&member);
  }

  for (std::size_t k = 0; k < scales.size(); ++k) {
    const double r = scales[k];
    EquicontinuityRow row;
    row.scale = r;
    for (std::size_t mi = 0; mi < admitted.size(); ++mi) {
      const MappingSpec& member = *admitted[mi];
      const std::vector<Vec> anchors = anchors_in(member, compact);
      for (std::size_t j = 0; j < options.pairs_per_scale; ++j) {
        CounterRng rng(options.seed, (static_cast<std::uint64_t>(mi) << 40) ^ (static_cast<std::uint64_t>(k) << 24) ^ j);
        const double sep = r * (0.5 + 0.5 * rng.uniform());
        const bool anchored = !anchors.empty() && j % 2 == 1;
        const Vec* anchor = anchored ? &anchors[(j / 2) % anchors.size()] : nullptr;
        const auto pair = draw_pair(compact, anchor, anchored && (j / 2) % 4 == 0, sep, rng);
        if (!pair) continue;
        const double inc = increment(member, *pair);
        if (inc > row.mu) {
          row.mu = inc;
          row.worst_member = member.name;
        }
      }
    }
    row.bound = rep.L_shared * std::pow(r, rep.alpha_min);
    row.pass = row.mu <= row.bound;
    rep.L_empirical = std::max(rep.L_empirical, row.mu / std::pow(r, rep.alpha_min));
    rep.rows.push_back(row);
  }
  for (std::size_t k = 1; k < rep.rows.size(); ++k)
    if (rep.rows[k].mu > rep.rows[k - 1].mu * (1.0 + options.monotone_slack) + 1e-12) rep.monotone = false;
  rep.pass = rep.refused_members.empty() && rep.monotone &&
             std::all_of(rep.rows.begin(), rep.rows.end(), [](const EquicontinuityRow& r) { return r.pass; });
  return rep;
}

}  // namespace qrlab

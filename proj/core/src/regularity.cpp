#include "qrlab/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qrlab/error.hpp"
#include "qrlab/rng.hpp"

namespace qrlab {

namespace {

constexpr double kRelativeFloor = 1e-12;

void finish(CheckReport& report) {
  report.pass = true;
  bool first = true;
  for (const RadiusCheck& row : report.per_radius) {
    if (row.skipped) continue;
    report.pass = report.pass && row.pass;
    if (first || row.slack < report.worst_slack) report.worst_slack = row.slack;
    first = false;
  }
}

std::string format_radius(double r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", r);
  return buf;
}

}  // namespace

bool is_unit_k1(double k1) { return std::abs(k1 - 1.0) <= kUnitK1Tolerance; }

HolderPrediction predicted_exponent(const DistortionPair& pair) {
  HolderPrediction p{HolderClass::one, 1.0, pair};
  if (is_unit_k1(pair.k1())) {
    if (pair.k2() > 0.0) {
      p.cls = HolderClass::any_below_one;
      p.value = std::numeric_limits<double>::quiet_NaN();
    }
  } else if (pair.k1() > 1.0) {
    p.cls = HolderClass::exact;
    p.value = 1.0 / pair.k1();
  }
  return p;
}

double HolderPrediction::exponent(double any_below_one_target) const {
  if (cls != HolderClass::any_below_one) return value;
  if (!(any_below_one_target > 0.0 && any_below_one_target < 1.0))
    throw InvalidArgument("a target exponent in (0, 1) is required when K1 = 1 and K2 > 0");
  return any_below_one_target;
}

std::string to_string(HolderClass cls) {
  switch (cls) {
    case HolderClass::exact:
      return "exact";
    case HolderClass::any_below_one:
      return "any_below_one";
    case HolderClass::one:
      return "one";
  }
  return "unknown";
}

MonotoneProfile compute_v(const RadialProfile& profile, const DistortionPair& pair) {
  if (profile.w.size() != profile.radii.size()) throw InvalidArgument("profile is missing w values");
  MonotoneProfile mp;
  mp.base = profile;
  mp.pair = pair;
  const double n = static_cast<double>(profile.n);
  const double omega = unit_ball_volume(static_cast<int>(profile.n));
  const double k1 = pair.k1(), k2 = pair.k2();
  mp.branch = is_unit_k1(k1) ? VBranch::unit_k1 : VBranch::general;
  for (std::size_t i = 0; i < profile.radii.size(); ++i) {
    const double r = profile.radii[i];
    if (!(r > 0.0)) throw InvalidArgument("compute_v requires positive radii");
    const QuadratureResult& w = profile.w[i];
    if (mp.branch == VBranch::general) {
      const double scale = std::pow(r, -n / k1);
      mp.v.push_back(w.value * scale + (k2 * omega / (k1 - 1.0)) * std::pow(r, n - n / k1));
      mp.v_err.push_back(w.error_estimate * scale);
    } else {
      const double scale = std::pow(r, -n);
      mp.v.push_back(w.value * scale + k2 * n * omega * std::log(r));
      mp.v_err.push_back(w.error_estimate * scale);
    }
  }
  return mp;
}

CheckReport check_v_monotone(const MonotoneProfile& mp) {
  if (mp.v.size() < 2) throw InvalidArgument("check_v_monotone needs at least two radii");
  CheckReport report;
  report.check = "v_monotone";
  for (std::size_t i = 1; i < mp.v.size(); ++i) {
    RadiusCheck row;
    row.r = mp.base.radii[i];
    row.lhs = mp.v[i - 1];
    row.rhs = mp.v[i];
    row.slack = mp.v[i] - mp.v[i - 1];
    row.tolerance = mp.v_err[i - 1] + mp.v_err[i] + 1e-9;
    row.pass = row.slack >= -row.tolerance;
    report.per_radius.push_back(row);
  }
  finish(report);
  if (!report.pass) {
    const auto worst = std::min_element(report.per_radius.begin(), report.per_radius.end(),
                                        [](const RadiusCheck& a, const RadiusCheck& b) { return a.slack < b.slack; });
    report.diagnostic = "v decreasing: drop of " + format_radius(-worst->slack) + " at r = " + format_radius(worst->r);
  }
  return report;
}

CheckReport check_differential_inequality(const RadialProfile& profile, const DistortionPair& pair) {
  if (profile.w.size() != profile.radii.size() || profile.s.size() != profile.radii.size())
    throw InvalidArgument("profile is missing w or s values");
  CheckReport report;
  report.check = "differential_inequality";
  const double n = static_cast<double>(profile.n);
  const double omega = unit_ball_volume(static_cast<int>(profile.n));
  for (std::size_t i = 0; i < profile.radii.size(); ++i) {
    const double r = profile.radii[i];
    const double factor = pair.k1() * r / n;
    RadiusCheck row;
    row.r = r;
    row.lhs = profile.w[i].value;
    row.rhs = factor * profile.s[i].value + pair.k2() * omega * std::pow(r, n);
    row.slack = row.rhs - row.lhs;
    row.tolerance = factor * profile.s[i].error_estimate + profile.w[i].error_estimate +
                    kRelativeFloor * std::max(std::abs(row.lhs), std::abs(row.rhs));
    row.pass = row.slack >= -row.tolerance;
    report.per_radius.push_back(row);
  }
  finish(report);
  if (!report.pass) report.diagnostic = "w(r) exceeds (K1 r/n) s(r) + K2 omega_n r^n";
  return report;
}

int growth_case(double k1, double k2) {
  if (is_unit_k1(k1)) return k2 > 0.0 ? 2 : 3;
  return k1 > 1.0 ? 1 : 4;
}

double case2_validity_radius(double d, std::size_t n, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("case 2 needs alpha in (0, 1)");
  const double reach = 2.0 * d / 3.0;
  const double p = static_cast<double>(n) * (1.0 - alpha);
  auto phi = [&](double r) { return std::pow(r, p) * std::log(reach / r); };
  // phi rises on (0, r_peak) and falls to 0 at `reach`.
  const double r_peak = reach * std::exp(-1.0 / p);
  if (phi(r_peak) <= 1.0) return reach;
  double lo = 0.0, hi = r_peak;
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid) <= 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

GrowthBound growth_bound(const GrowthInputs& in) {
  if (!(in.energy > 0.0) || !std::isfinite(in.energy)) throw InvalidArgument("growth_bound needs M^n > 0");
  if (!(in.d > 0.0) || !std::isfinite(in.d)) throw InvalidArgument("growth_bound needs d > 0");
  if (in.n < 2) throw InvalidArgument("growth_bound needs n >= 2");
  const DistortionPair pair(in.k1, in.k2);  // validates K1, K2
  const int case_id = growth_case(in.k1, in.k2);
  if (in.requested_case && *in.requested_case != case_id)
    throw InvalidArgument("requested growth case " + std::to_string(*in.requested_case) +
                          " is inconsistent with (K1, K2), which selects case " + std::to_string(case_id));

  const double n = static_cast<double>(in.n);
  const double omega = unit_ball_volume(static_cast<int>(in.n));
  const double reach = 2.0 * in.d / 3.0;
  const double k1 = in.k1, k2 = in.k2;
  GrowthBound b;
  b.case_id = case_id;
  b.inputs = in;
  auto c1 = [&] {
    return in.energy * std::pow(reach, -n / k1) + (k2 * omega / (k1 - 1.0)) * std::pow(reach, n - n / k1);
  };
  switch (case_id) {
    case 1:
      b.C = c1();
      b.growth_exponent = n / k1;
      b.holder_exponent = 1.0 / k1;
      b.validity_radius = reach;
      break;
    case 2: {
      if (!in.target_alpha) throw InvalidArgument("case 2 (K1 = 1, K2 > 0) needs a target alpha");
      const double alpha = *in.target_alpha;
      if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("case 2 target alpha must lie in (0, 1)");
      const double m = std::pow(in.energy, 1.0 / n);
      b.C = std::pow(1.5 * m, n) * std::pow(in.d, -n * alpha) + 1.0;
      b.growth_exponent = n * alpha;
      b.holder_exponent = alpha;
      b.validity_radius = case2_validity_radius(in.d, in.n, alpha);
      break;
    }
    case 3:
      b.C = in.energy * std::pow(reach, -n);
      b.growth_exponent = n;
      b.holder_exponent = 1.0;
      b.validity_radius = reach;
      break;
    default:
      b.C = c1() * std::pow(reach, n * (1.0 - k1) / k1) + k2 * omega / (1.0 - k1);
      b.growth_exponent = n;
      b.holder_exponent = 1.0;
      b.validity_radius = reach;
      break;
  }
  return b;
}

CheckReport check_morrey_condition(const RadialProfile& profile, const GrowthBound& bound) {
  if (profile.w.size() != profile.radii.size()) throw InvalidArgument("profile is missing w values");
  CheckReport report;
  report.check = "morrey";
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < profile.radii.size(); ++i) {
    const double r = profile.radii[i];
    RadiusCheck row;
    row.r = r;
    row.lhs = profile.w[i].value;
    row.rhs = bound.C * std::pow(r, bound.growth_exponent);
    row.slack = row.rhs - row.lhs;
    row.tolerance = profile.w[i].error_estimate + kRelativeFloor * std::abs(row.lhs);
    if (r > bound.validity_radius) {
      row.skipped = true;
      ++skipped;
    } else {
      row.pass = row.slack >= -row.tolerance;
    }
    report.per_radius.push_back(row);
  }
  finish(report);
  if (skipped == profile.radii.size()) {
    report.pass = false;
    report.diagnostic = "every radius exceeds the validity radius";
  } else if (!report.pass) {
    report.diagnostic = "energy growth exceeds C r^{n alpha}";
  } else if (skipped > 0) {
    report.diagnostic = std::to_string(skipped) + " radii beyond the validity radius were skipped";
  }
  return report;
}

std::vector<double> default_probe_radii(const MappingSpec& map, std::span<const double> a) {
  const double scale = std::min({map.domain.boundary_distance(a), map.singular_distance(a), 1.0});
  if (!(scale > 0.0)) throw DomainError("probe point has no room for a probe ball");
  return {0.1 * scale, 1e-2 * scale, 1e-3 * scale, 1e-4 * scale};
}

DifferentiabilityReport differentiability_check(const MappingSpec& map, std::span<const double> a,
                                                std::span<const double> radii,
                                                std::size_t samples_per_radius, std::uint64_t seed) {
  if (radii.empty()) throw InvalidArgument("differentiability_check needs radii");
  if (samples_per_radius == 0) throw InvalidArgument("differentiability_check needs samples");
  if (map.singular_distance(a) < kSingularExclusion)
    throw SingularPointError("differentiability is only probed away from singular points");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw InvalidArgument("probe radii must be positive");
    if (i > 0 && !(radii[i] < radii[i - 1])) throw InvalidArgument("probe radii must be strictly decreasing");
  }
  const double rho = map.domain.boundary_distance(a);
  if (radii.front() > rho) throw DomainError("probe ball leaves the domain");

  DifferentiabilityReport rep;
  rep.point.assign(a.begin(), a.end());
  rep.radii.assign(radii.begin(), radii.end());
  const DifferentialSample ds = sample_differential(map, a);
  rep.differential_norm = ds.op_norm;
  const Vec fa = map(a);
  const double fa_norm = norm(fa);
  constexpr double kRoundoff = 256.0 * std::numeric_limits<double>::epsilon();
  // A finite-difference differential carries its own error into every
  // beta_hat; estimate it from the 2h stencil.
  double differential_error = 0.0;
  if (ds.provenance == Provenance::finite_difference && map.domain.boundary_distance(a) > 2.0 * ds.step &&
      map.singular_distance(a) > std::max(kSingularExclusion, 2.0 * ds.step)) {
    const SquareMatrix coarse = finite_difference_differential(map, a, 2.0 * ds.step);
    differential_error = 4.0 * (static_cast<double>(map.n) * (ds.matrix - coarse).max_abs_entry() +
                                std::numeric_limits<double>::epsilon() * (fa_norm + 1.0) / ds.step);
  }
  rep.roundoff_regime = true;
  Vec x(map.n);
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const double r = radii[k];
    CounterRng rng(seed, k);
    double beta = 0.0;
    for (std::size_t j = 0; j < samples_per_radius; ++j) {
      const Vec u = rng.unit_vector(map.n);
      Vec step(map.n);
      for (std::size_t i = 0; i < map.n; ++i) {
        step[i] = r * u[i];
        x[i] = a[i] + step[i];
      }
      const Vec fx = map(x);
      const Vec lin = ds.matrix.apply(step);
      Vec rem(map.n);
      for (std::size_t i = 0; i < map.n; ++i) rem[i] = fx[i] - fa[i] - lin[i];
      beta = std::max(beta, norm(rem) / r);
    }
    rep.beta_hat.push_back(beta);
    const double floor = kRoundoff * (fa_norm + ds.op_norm * r + 1.0) / r + differential_error;
    rep.roundoff_regime = rep.roundoff_regime && beta <= floor;
  }
  const double first = rep.beta_hat.front();
  const double last = rep.beta_hat.back();
  const bool small = last <= 1e-3 * rep.differential_norm;
  const bool decreasing = first >= 1.5 * last;
  rep.pass = small && (decreasing || rep.roundoff_regime);
  if (rep.pass) {
    rep.diagnostic = rep.roundoff_regime ? "affine at working precision" : "beta_hat -> 0";
  } else if (!small) {
    rep.diagnostic = "beta_hat does not vanish: final value " + format_radius(last) + " vs |Df(a)| = " +
                     format_radius(rep.differential_norm);
  } else {
    rep.diagnostic = "beta_hat is not decreasing";
  }
  return rep;
}

}  // namespace qrlab

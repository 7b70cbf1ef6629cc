#include "qrlab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qrlab/error.hpp"
#include "qrlab/rng.hpp"

namespace qrlab {

namespace {

// Relative floor added to every combined tolerance.
constexpr double kRelativeFloor = 1e-12;

void finish(CheckReport& report) {
  report.pass = true;
  report.worst_slack = 0.0;
  bool first = true;
  for (const RadiusCheck& row : report.per_radius) {
    if (row.skipped) continue;
    report.pass = report.pass && row.pass;
    if (first || row.slack < report.worst_slack) report.worst_slack = row.slack;
    first = false;
  }
}

void require_same_size(const RadialProfile& p, const std::vector<QuadratureResult>& v, const char* what) {
  if (v.size() != p.radii.size())
    throw InvalidArgument(std::string("profile is missing ") + what + " values");
}

}  // namespace

bool RadialProfile::budget_exhausted() const {
  auto any = [](const std::vector<QuadratureResult>& v) {
    return std::any_of(v.begin(), v.end(), [](const QuadratureResult& q) { return q.budget_exhausted; });
  };
  return any(w) || any(w_mc) || any(s) || any(jacobian_integral) || any(abs_jacobian_integral);
}

ScalarField energy_density(const MappingSpec& map, const DifferentialOptions& options) {
  const double n = static_cast<double>(map.n);
  return [&map, options, n](std::span<const double> x) {
    return std::pow(sample_differential(map, x, options).op_norm, n);
  };
}

ScalarField jacobian_density(const MappingSpec& map, const DifferentialOptions& options) {
  return [&map, options](std::span<const double> x) { return sample_differential(map, x, options).jacobian; };
}

RadialProfile energy_profile(const MappingSpec& map, std::span<const double> center,
                             std::span<const double> radii, const ProfileOptions& options) {
  if (center.size() != map.n) throw InvalidArgument("profile center dimension does not match mapping");
  if (radii.empty()) throw InvalidArgument("profile needs at least one radius");
  const double rho = map.domain.boundary_distance(center);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw InvalidArgument("profile radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw InvalidArgument("profile radii must be strictly increasing");
    if (!(radii[i] < rho))
      throw DomainError("profile radius " + std::to_string(radii[i]) + " is not below rho(center) = " +
                        std::to_string(rho));
  }

  RadialProfile profile;
  profile.center.assign(center.begin(), center.end());
  profile.n = map.n;
  profile.radii.assign(radii.begin(), radii.end());
  const ScalarField energy = energy_density(map, options.differential);
  const ScalarField jac = jacobian_density(map, options.differential);
  const ScalarField abs_jac = [&jac](std::span<const double> x) { return std::abs(jac(x)); };

  for (std::size_t i = 0; i < radii.size(); ++i) {
    QuadratureOptions q = options.quadrature;
    const double r = radii[i];
    q.seed = derive_seed(options.quadrature.seed, 4 * i);
    profile.w.push_back(ball_integral(energy, center, r, q));
    q.seed = derive_seed(options.quadrature.seed, 4 * i + 1);
    profile.s.push_back(sphere_integral(energy, center, r, q));
    q.seed = derive_seed(options.quadrature.seed, 4 * i + 2);
    profile.jacobian_integral.push_back(ball_integral(jac, center, r, q));
    profile.abs_jacobian_integral.push_back(ball_integral(abs_jac, center, r, q));
    if (options.monte_carlo) {
      q.seed = derive_seed(options.quadrature.seed, 4 * i + 3);
      profile.w_mc.push_back(ball_integral_monte_carlo(energy, center, r, q));
    }
  }
  return profile;
}

QuadratureResult domain_energy(const MappingSpec& map, const ProfileOptions& options) {
  const ScalarField energy = energy_density(map, options.differential);
  if (map.domain.kind() == DomainRegion::Kind::ball)
    return ball_integral(energy, map.domain.center(), map.domain.radius(), options.quadrature);
  return box_integral(energy, map.domain.low(), map.domain.high(), options.quadrature);
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo)) throw InvalidArgument("log_spaced requires 0 < lo < hi");
  if (count < 2) return {lo};
  std::vector<double> out(count);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> default_radii(double d, std::size_t count) {
  if (!(d > 0.0)) throw InvalidArgument("default_radii requires d > 0");
  return log_spaced(1e-3 * d, (2.0 * d / 3.0) * (1.0 - 1e-6), count);
}

CheckReport fubini_check(const RadialProfile& profile) {
  if (!profile.has_monte_carlo()) throw InvalidArgument("fubini_check needs the Monte Carlo ball estimator");
  require_same_size(profile, profile.w, "w");
  CheckReport report;
  report.check = "fubini";
  for (std::size_t i = 0; i < profile.radii.size(); ++i) {
    const QuadratureResult& radial = profile.w[i];
    const QuadratureResult& mc = profile.w_mc[i];
    RadiusCheck row;
    row.r = profile.radii[i];
    row.lhs = mc.value;
    row.rhs = radial.value;
    const double residual = std::abs(mc.value - radial.value);
    row.tolerance = radial.error_estimate + mc.error_estimate +
                    kRelativeFloor * std::max(std::abs(mc.value), std::abs(radial.value));
    row.slack = -residual;
    row.pass = residual <= row.tolerance;
    report.per_radius.push_back(row);
  }
  finish(report);
  if (!report.pass) report.diagnostic = "ball Monte Carlo and radial composition disagree";
  return report;
}

CheckReport isoperimetric_check(const RadialProfile& profile) {
  require_same_size(profile, profile.s, "s");
  require_same_size(profile, profile.jacobian_integral, "jacobian integral");
  CheckReport report;
  report.check = "isoperimetric";
  const double n = static_cast<double>(profile.n);
  for (std::size_t i = 0; i < profile.radii.size(); ++i) {
    const double t = profile.radii[i];
    const QuadratureResult& s = profile.s[i];
    const QuadratureResult& j = profile.jacobian_integral[i];
    RadiusCheck row;
    row.r = t;
    row.lhs = j.value;
    row.rhs = (t / n) * s.value;
    row.slack = row.rhs - row.lhs;
    row.abs_form_slack = row.rhs - std::abs(row.lhs);
    row.tolerance = j.error_estimate + (t / n) * s.error_estimate +
                    kRelativeFloor * std::max(std::abs(row.lhs), std::abs(row.rhs));
    row.pass = row.slack >= -row.tolerance;
    report.per_radius.push_back(row);
  }
  finish(report);
  if (!report.pass) report.diagnostic = "Jacobian integral exceeds (t/n) s(t)";
  return report;
}

CheckReport sign_consequence_check(const RadialProfile& profile) {
  require_same_size(profile, profile.jacobian_integral, "jacobian integral");
  require_same_size(profile, profile.abs_jacobian_integral, "|J| integral");
  CheckReport report;
  report.check = "sign_consequence";
  for (std::size_t i = 0; i < profile.radii.size(); ++i) {
    const QuadratureResult& j = profile.jacobian_integral[i];
    const QuadratureResult& aj = profile.abs_jacobian_integral[i];
    RadiusCheck row;
    row.r = profile.radii[i];
    row.lhs = std::abs(j.value);
    row.rhs = aj.value;
    const double residual = std::abs(row.rhs - row.lhs);
    row.slack = -residual;
    row.tolerance = j.error_estimate + aj.error_estimate + kRelativeFloor * std::abs(aj.value);
    row.pass = residual <= row.tolerance;
    report.per_radius.push_back(row);
  }
  finish(report);
  if (!report.pass) report.diagnostic = "|int J| differs from int |J|: the Jacobian changes sign";
  return report;
}

}  // namespace qrlab

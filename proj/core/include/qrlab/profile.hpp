#pragma once

#include <span>
#include <vector>

#include "qrlab/check_report.hpp"
#include "qrlab/differential.hpp"
#include "qrlab/mapping.hpp"
#include "qrlab/quadrature.hpp"

namespace qrlab {

// Energy profile around a center a:
//   w(r) = int_{B(a,r)} |Df|^n,  s(r) = int_{S(a,r)} |Df|^n,
//   jint(r) = int_{B(a,r)} J.
// w is the radial-composition estimate; w_mc the independent Monte Carlo one.
struct RadialProfile {
  Vec center;
  std::size_t n = 0;
  std::vector<double> radii;
  std::vector<QuadratureResult> w;
  std::vector<QuadratureResult> w_mc;
  std::vector<QuadratureResult> s;
  std::vector<QuadratureResult> jacobian_integral;
  std::vector<QuadratureResult> abs_jacobian_integral;

  bool has_monte_carlo() const { return w_mc.size() == radii.size() && !radii.empty(); }
  bool budget_exhausted() const;
};

struct ProfileOptions {
  QuadratureOptions quadrature;
  DifferentialOptions differential;
  bool monte_carlo = true;
};

// Integrand helpers built on sample_differential. The returned fields hold
// a reference to `map`, which must outlive them.
ScalarField energy_density(const MappingSpec& map, const DifferentialOptions& options = {});
ScalarField jacobian_density(const MappingSpec& map, const DifferentialOptions& options = {});

// Requires strictly increasing radii with every radius < rho(center). The
// center itself may be a singular point: no node is placed on it.
RadialProfile energy_profile(const MappingSpec& map, std::span<const double> center,
                             std::span<const double> radii, const ProfileOptions& options = {});

// int_Omega |Df|^n over the whole domain (ball: radial composition; box:
// tensor Gauss).
QuadratureResult domain_energy(const MappingSpec& map, const ProfileOptions& options = {});

// count values log-spaced in [lo, hi].
std::vector<double> log_spaced(double lo, double hi, std::size_t count);

// 50 (or count) log-spaced radii in [1e-3 d, (2d/3)(1 - 1e-6)].
std::vector<double> default_radii(double d, std::size_t count = 50);

// |w_mc(r) - w(r)| <= combined error, with w(r) = int_0^r s(t) dt by radial
// composition.
CheckReport fubini_check(const RadialProfile& profile);

// slack(t) = (t/n) s(t) - int_{B(a,t)} J >= -combined error.
CheckReport isoperimetric_check(const RadialProfile& profile);

// | |int_B J| - int_B |J| | <= combined error; meaningful once the sign
// check has passed.
CheckReport sign_consequence_check(const RadialProfile& profile);

}  // namespace qrlab

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qrlab/check_report.hpp"
#include "qrlab/distortion_pair.hpp"
#include "qrlab/mapping.hpp"
#include "qrlab/profile.hpp"

namespace qrlab {

// K1 values within this distance of 1 take the K1 = 1 branches.
inline constexpr double kUnitK1Tolerance = 1e-12;
bool is_unit_k1(double k1);

// ---------------------------------------------------------------------------
// Predicted Hoelder exponent.

enum class HolderClass { exact, any_below_one, one };

struct HolderPrediction {
  HolderClass cls = HolderClass::one;
  double value = 1.0;  // 1/K1 for exact, 1 for one, NaN for any_below_one
  DistortionPair source;

  // The exponent to use downstream; any_below_one needs a caller target.
  double exponent(double any_below_one_target) const;
};

HolderPrediction predicted_exponent(const DistortionPair& pair);
std::string to_string(HolderClass cls);

// ---------------------------------------------------------------------------
// The monotone quantity
//   v(r) = w(r) / r^{n/K1} + K2 omega_n / (K1 - 1) * r^{n - n/K1}   (K1 != 1)
//   v(r) = w(r) / r^n      + K2 n omega_n ln r                      (K1 == 1)

enum class VBranch { general, unit_k1 };

struct MonotoneProfile {
  RadialProfile base;
  DistortionPair pair{1.0, 0.0};
  std::vector<double> v;
  std::vector<double> v_err;
  VBranch branch = VBranch::general;
};

MonotoneProfile compute_v(const RadialProfile& profile, const DistortionPair& pair);

// Passes iff v(r_{i+1}) >= v(r_i) - (err_i + err_{i+1} + 1e-9).
CheckReport check_v_monotone(const MonotoneProfile& mp);

// slack(r) = (K1 r / n) s(r) + K2 omega_n r^n - w(r) >= -combined error.
CheckReport check_differential_inequality(const RadialProfile& profile, const DistortionPair& pair);

// ---------------------------------------------------------------------------
// Energy growth bounds w(a, r) <= C r^{n alpha} for r <= delta.

struct GrowthInputs {
  double k1 = 1.0;
  double k2 = 0.0;
  double energy = 1.0;  // M^n = int_Omega |Df|^n
  double d = 1.0;       // dist(V, boundary)
  std::size_t n = 2;
  std::optional<double> target_alpha;  // required when K1 = 1 and K2 > 0
  std::optional<int> requested_case;   // cross-checked against (K1, K2)
};

struct GrowthBound {
  int case_id = 1;
  double C = 0.0;
  double growth_exponent = 0.0;
  double holder_exponent = 0.0;
  double validity_radius = 0.0;
  GrowthInputs inputs;
};

int growth_case(double k1, double k2);
GrowthBound growth_bound(const GrowthInputs& inputs);

// Largest delta <= 2d/3 with r^{n(1-alpha)} ln(2d/(3r)) <= 1 for all r <= delta.
double case2_validity_radius(double d, std::size_t n, double alpha);

// w(r_i) <= C r_i^{growth_exponent} + err_i at every r_i <= delta; larger
// radii are reported as skipped.
CheckReport check_morrey_condition(const RadialProfile& profile, const GrowthBound& bound);

// ---------------------------------------------------------------------------
// Empirical Hoelder behaviour from point pairs.

struct HolderOptions {
  std::optional<double> alpha;  // fixed exponent; auto when unset
  std::size_t pair_count = 10'000;
  std::size_t bins = 20;
  std::uint64_t seed = 0;
  std::optional<double> delta;  // Morrey validity radius, 2d/3 when unset
};

struct HolderBin {
  double sep_lo = 0.0;
  double sep_hi = 0.0;
  std::size_t pairs = 0;
  double max_increment = 0.0;  // max |f(x) - f(y)| in the bin
  double sep_at_max = 0.0;
  bool in_regression = false;
};

struct HolderEstimate {
  double alpha_used = 1.0;
  double L_hat = 0.0;    // sup h over all pairs
  double L_hat_G = 0.0;  // sup h over pairs with |x - y| < gamma
  double L_hat_H = 0.0;  // sup h over pairs with |x - y| >= gamma
  double alpha_hat = 0.0;
  std::size_t pair_count = 0;
  std::size_t skipped_pairs = 0;
  DomainRegion compact_set = DomainRegion::ball(Vec{0.0, 0.0}, 1.0);
  double d = 0.0;
  double gamma = 0.0;
  std::vector<HolderBin> bins;
  bool flagged = false;  // alpha_hat outside (0, 1.5) or undefined
};

// Pairs are stratified in log-separation over [1e-3 d, diam V]; half of each
// bin is localized around singular points inside V (a quarter of those
// anchored exactly on the singular point). alpha_hat regresses the per-bin
// maximum increment on its separation over bins below gamma = min(delta, d)/3.
HolderEstimate estimate_holder(const MappingSpec& map, const DomainRegion& compact,
                               const HolderOptions& options = {});

// ---------------------------------------------------------------------------
// Equicontinuity of a family with a shared energy bound.

struct EquicontinuityOptions {
  std::size_t pairs_per_scale = 2'000;
  std::uint64_t seed = 0;
  double any_below_one_alpha = 0.95;
  double monotone_slack = 0.05;  // relative sampling-noise allowance
  ProfileOptions profile;
};

struct EquicontinuityRow {
  double scale = 0.0;
  double mu = 0.0;
  double bound = 0.0;  // L_shared * scale^alpha_min
  std::string worst_member;
  bool pass = true;
};

struct EquicontinuityReport {
  double energy_bound = 0.0;
  double alpha_min = 1.0;
  double L_shared = 0.0;
  double L_empirical = 0.0;  // max_r mu(r) / r^alpha_min
  std::vector<EquicontinuityRow> rows;
  std::vector<std::string> refused_members;
  std::vector<double> member_energies;
  bool monotone = true;
  bool pass = true;
};

// mu(r) = max over the family of sampled sup{|f(x) - f(y)| : |x - y| <= r}.
// L_shared = max_i C_i^{1/n} with C_i each member's growth constant (the
// Morrey oscillation constant is normalized to 1).
EquicontinuityReport equicontinuity_check(std::span<const MappingSpec> family,
                                          const DomainRegion& compact, double energy_bound,
                                          std::span<const double> scales,
                                          const EquicontinuityOptions& options = {});

// ---------------------------------------------------------------------------
// Differentiability probe at a point.

struct DifferentiabilityReport {
  Vec point;
  std::vector<double> radii;
  std::vector<double> beta_hat;
  double differential_norm = 0.0;
  bool roundoff_regime = false;  // every beta_hat is at working precision
  bool pass = false;
  std::string diagnostic;
};

// beta_hat(r) = max over directions u of |f(a + r u) - f(a) - Df(a) r u| / r.
// Passes iff beta_hat(r_min) <= 1e-3 |Df(a)| and either beta_hat drops by a
// factor >= 1.5 from r_max to r_min or every value is at roundoff level.
// Throws SingularPointError when a is within 1e-6 of a singular point.
DifferentiabilityReport differentiability_check(const MappingSpec& map, std::span<const double> a,
                                                std::span<const double> radii,
                                                std::size_t samples_per_radius = 64,
                                                std::uint64_t seed = 0);

// {1e-1, 1e-2, 1e-3, 1e-4} * min(rho(a), distance to singular points, 1).
std::vector<double> default_probe_radii(const MappingSpec& map, std::span<const double> a);

}  // namespace qrlab

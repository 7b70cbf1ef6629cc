#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "qrlab/linalg.hpp"

namespace qrlab {

using ScalarField = std::function<double(std::span<const double>)>;

enum class QuadratureMethod { tensor_gauss, sphere_rule, radial_composition, monte_carlo };

std::string to_string(QuadratureMethod method);

// error_estimate is a 3-sigma-level bound: 3x the standard error for Monte
// Carlo, 3x the last refinement difference (plus a roundoff floor) for
// deterministic rules. Checks compare residuals against sums of these.
struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::uint64_t evaluations = 0;
  QuadratureMethod method = QuadratureMethod::sphere_rule;
  std::uint64_t seed = 0;  // meaningful for monte_carlo only
  bool budget_exhausted = false;
};

struct QuadratureOptions {
  double tol_rel = 1e-7;
  std::uint64_t budget = 10'000'000;
  std::size_t sphere_samples = 100'000;        // n >= 3 sphere Monte Carlo
  std::size_t sphere_samples_in_ball = 1'024;  // n >= 3, inside radial composition
  std::size_t ball_mc_samples = 100'000;
  double core_fraction = 1e-6;  // innermost radial node clamp, relative to r
  std::uint64_t seed = 0;
};

// omega_n = pi^{n/2} / Gamma(n/2 + 1) via omega_n = omega_{n-2} * 2 pi / n.
double unit_ball_volume(int n);
// |S^{n-1}| = n omega_n.
double unit_sphere_area(int n);

// 64-point Gauss-Legendre nodes/weights on [-1, 1].
std::span<const double> gauss_legendre_nodes();
std::span<const double> gauss_legendre_weights();

// Integral of g over the sphere S(a, t). n = 2: periodic trapezoid rule with
// doubling. n >= 3: seeded Monte Carlo over Gaussian-normalized directions.
QuadratureResult sphere_integral(const ScalarField& g, std::span<const double> a, double t,
                                 const QuadratureOptions& options = {});

// Integral of g over B(a, r) by radial composition: Gauss-Legendre in the
// radius on dyadic shells refined toward the center, sphere_integral on each
// shell. The core [0, core_fraction * r] is closed with a power-law tail
// fitted to the two innermost shells.
QuadratureResult ball_integral(const ScalarField& g, std::span<const double> a, double r,
                               const QuadratureOptions& options = {});

// Independent estimator of the same integral: Monte Carlo in polar
// coordinates, radius uniform on (0, r) and direction uniform, weighted by
// r * |S(0, t)|. Radius-uniform sampling keeps the variance finite for
// integrands like |x|^{-n(1-alpha)}.
QuadratureResult ball_integral_monte_carlo(const ScalarField& g, std::span<const double> a, double r,
                                           const QuadratureOptions& options = {});

// Tensor Gauss-Legendre over an axis-aligned box.
QuadratureResult box_integral(const ScalarField& g, std::span<const double> low,
                              std::span<const double> high, const QuadratureOptions& options = {});

}  // namespace qrlab

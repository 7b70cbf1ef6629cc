#include "qrlab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "qrlab/error.hpp"
#include "qrlab/rng.hpp"

namespace qrlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1] by Newton iteration on P_m in long double.
Rule compute_gauss_legendre(std::size_t m) {
  Rule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  const long double pi = std::numbers::pi_v<long double>;
  for (std::size_t i = 0; i < (m + 1) / 2; ++i) {
    long double x = std::cos(pi * (static_cast<long double>(i) + 0.75L) / (static_cast<long double>(m) + 0.5L));
    long double dp = 0.0L;
    for (int iter = 0; iter < 100; ++iter) {
      long double p0 = 1.0L, p1 = x;
      for (std::size_t k = 2; k <= m; ++k) {
        const long double pk = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / static_cast<long double>(k);
        p0 = p1;
        p1 = pk;
      }
      dp = static_cast<long double>(m) * (x * p1 - p0) / (x * x - 1.0L);
      const long double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-19L) break;
    }
    long double p0 = 1.0L, p1 = x;
    for (std::size_t k = 2; k <= m; ++k) {
      const long double pk = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / static_cast<long double>(k);
      p0 = p1;
      p1 = pk;
    }
    dp = static_cast<long double>(m) * (x * p1 - p0) / (x * x - 1.0L);
    const long double w = 2.0L / ((1.0L - x * x) * dp * dp);
    rule.nodes[i] = static_cast<double>(-x);
    rule.nodes[m - 1 - i] = static_cast<double>(x);
    rule.weights[i] = rule.weights[m - 1 - i] = static_cast<double>(w);
  }
  return rule;
}

const Rule& gauss_legendre(std::size_t m) {
  static std::mutex mutex;
  static std::map<std::size_t, Rule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, compute_gauss_legendre(m)).first;
  return it->second;
}

// Integral of g over S(a, t) plus the integral of |g| (for relative
// tolerances) and the evaluation count.
struct SphereValue {
  double value = 0.0;
  double abs_value = 0.0;
  double error = 0.0;
  std::uint64_t evaluations = 0;
  bool exhausted = false;
};

double checked(const ScalarField& g, std::span<const double> x) {
  const double v = g(x);
  if (!std::isfinite(v)) throw NumericalError("integrand returned a non-finite value");
  return v;
}

SphereValue circle_trapezoid(const ScalarField& g, std::span<const double> a, double t,
                             double tol_rel, std::uint64_t budget) {
  const double two_pi = 2.0 * std::numbers::pi;
  std::size_t count = 16;
  CompensatedSum sum, abs_sum;
  std::array<double, 2> x{};
  auto eval = [&](std::size_t k, std::size_t total) {
    const double phi = two_pi * static_cast<double>(k) / static_cast<double>(total);
    x[0] = a[0] + t * std::cos(phi);
    x[1] = a[1] + t * std::sin(phi);
    const double v = checked(g, x);
    sum.add(v);
    abs_sum.add(std::abs(v));
  };
  for (std::size_t k = 0; k < count; ++k) eval(k, count);
  SphereValue out;
  out.evaluations = count;
  double prev = two_pi * t * sum.value() / static_cast<double>(count);
  constexpr std::size_t kMaxPoints = std::size_t{1} << 22;
  while (true) {
    if (out.evaluations + count > budget || 2 * count > kMaxPoints) {
      out.value = prev;
      out.abs_value = two_pi * t * abs_sum.value() / static_cast<double>(count);
      out.error = 3.0 * std::abs(prev) + 64.0 * kEps * out.abs_value;
      out.exhausted = true;
      return out;
    }
    for (std::size_t k = 1; k < 2 * count; k += 2) eval(k, 2 * count);
    out.evaluations += count;
    count *= 2;
    const double cur = two_pi * t * sum.value() / static_cast<double>(count);
    const double abs_cur = two_pi * t * abs_sum.value() / static_cast<double>(count);
    const double diff = std::abs(cur - prev);
    if (diff <= tol_rel * abs_cur) {
      out.value = cur;
      out.abs_value = abs_cur;
      out.error = 3.0 * diff + 64.0 * kEps * abs_cur;
      return out;
    }
    prev = cur;
  }
}

SphereValue sphere_monte_carlo(const ScalarField& g, std::span<const double> a, double t,
                               std::size_t samples, std::uint64_t seed, std::uint64_t stream) {
  const std::size_t n = a.size();
  const double area = unit_sphere_area(static_cast<int>(n)) * std::pow(t, static_cast<double>(n - 1));
  CounterRng rng(seed, stream);
  Vec x(n);
  // Welford mean/variance.
  double mean = 0.0, m2 = 0.0;
  CompensatedSum abs_sum;
  for (std::size_t i = 0; i < samples; ++i) {
    const Vec u = rng.unit_vector(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = a[k] + t * u[k];
    const double v = checked(g, x);
    abs_sum.add(std::abs(v));
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  SphereValue out;
  out.value = area * mean;
  out.abs_value = area * abs_sum.value() / static_cast<double>(samples);
  const double var = samples > 1 ? m2 / static_cast<double>(samples - 1) : 0.0;
  out.error = 3.0 * area * std::sqrt(var / static_cast<double>(samples)) + 64.0 * kEps * out.abs_value;
  out.evaluations = samples;
  return out;
}

SphereValue sphere_value(const ScalarField& g, std::span<const double> a, double t,
                         const QuadratureOptions& options, std::size_t mc_samples,
                         std::uint64_t stream, std::uint64_t budget) {
  if (a.size() == 2) return circle_trapezoid(g, a, t, options.tol_rel, budget);
  return sphere_monte_carlo(g, a, t, mc_samples, options.seed, stream);
}

void check_dimension(std::span<const double> a) {
  if (a.size() < 2) throw InvalidArgument("quadrature requires dimension n >= 2");
  if (!all_finite(a)) throw InvalidArgument("quadrature center must be finite");
}

}  // namespace

std::string to_string(QuadratureMethod method) {
  switch (method) {
    case QuadratureMethod::tensor_gauss:
      return "tensor_gauss";
    case QuadratureMethod::sphere_rule:
      return "sphere_rule";
    case QuadratureMethod::radial_composition:
      return "radial_composition";
    case QuadratureMethod::monte_carlo:
      return "monte_carlo";
  }
  return "unknown";
}

double unit_ball_volume(int n) {
  if (n < 1) throw InvalidArgument("unit_ball_volume requires n >= 1");
  double omega = (n % 2 == 0) ? 1.0 : 2.0;  // omega_0, omega_1
  for (int k = (n % 2 == 0) ? 2 : 3; k <= n; k += 2) omega *= 2.0 * std::numbers::pi / k;
  return omega;
}

double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

std::span<const double> gauss_legendre_nodes() { return gauss_legendre(64).nodes; }
std::span<const double> gauss_legendre_weights() { return gauss_legendre(64).weights; }

QuadratureResult sphere_integral(const ScalarField& g, std::span<const double> a, double t,
                                 const QuadratureOptions& options) {
  check_dimension(a);
  if (!(t > 0.0)) throw InvalidArgument("sphere radius must be positive");
  const SphereValue sv = sphere_value(g, a, t, options, options.sphere_samples, 0, options.budget);
  QuadratureResult r;
  r.value = sv.value;
  r.error_estimate = sv.error;
  r.evaluations = sv.evaluations;
  r.method = a.size() == 2 ? QuadratureMethod::sphere_rule : QuadratureMethod::monte_carlo;
  r.seed = a.size() == 2 ? 0 : options.seed;
  r.budget_exhausted = sv.exhausted;
  return r;
}

QuadratureResult ball_integral(const ScalarField& g, std::span<const double> a, double r,
                               const QuadratureOptions& options) {
  check_dimension(a);
  if (!(r > 0.0)) throw InvalidArgument("ball radius must be positive");
  const Rule& rule = gauss_legendre(64);
  const double core = options.core_fraction * r;
  std::uint64_t evaluations = 0;
  // Every shell reuses one direction set (n >= 3) so the radial refinement
  // sees a deterministic angular rule; the angular error is then fully
  // correlated across shells and adds linearly.
  constexpr std::uint64_t stream = 1;
  bool exhausted = false;

  struct Piece {
    double value = 0.0;
    double abs_value = 0.0;
    double error = 0.0;
  };
  auto shell = [&](double lo, double hi) {
    Piece p;
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    CompensatedSum sum, abs_sum, err;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = mid + half * rule.nodes[i];
      const std::uint64_t remaining = options.budget > evaluations ? options.budget - evaluations : 0;
      const SphereValue sv =
          sphere_value(g, a, t, options, options.sphere_samples_in_ball, stream, remaining);
      evaluations += sv.evaluations;
      exhausted = exhausted || sv.exhausted;
      sum.add(rule.weights[i] * sv.value);
      abs_sum.add(rule.weights[i] * sv.abs_value);
      err.add(rule.weights[i] * sv.error);
    }
    p.value = half * sum.value();
    p.abs_value = half * abs_sum.value();
    p.error = half * err.value();
    return p;
  };

  CompensatedSum shells, shells_abs, shells_err;
  double upper = r;
  Piece inner = shell(core, 0.5 * r);
  Piece outer = shell(0.5 * r, r);
  shells.add(outer.value);
  shells_abs.add(outer.abs_value);
  shells_err.add(outer.error);
  upper = 0.5 * r;
  double total = shells.value() + inner.value;
  double diff = std::numeric_limits<double>::infinity();
  while (upper > 4.0 * core && evaluations < options.budget) {
    const double split = 0.5 * upper;
    const Piece next_shell = shell(split, upper);
    const Piece next_inner = shell(core, split);
    shells.add(next_shell.value);
    shells_abs.add(next_shell.abs_value);
    shells_err.add(next_shell.error);
    const double next_total = shells.value() + next_inner.value;
    diff = std::abs(next_total - total);
    total = next_total;
    inner = next_inner;
    upper = split;
    const double scale = shells_abs.value() + inner.abs_value;
    // Radial refinement below the angular error buys nothing.
    const double angular = shells_err.value() + inner.error;
    if (diff <= std::max(options.tol_rel * scale, 0.1 * angular)) break;
  }
  if (evaluations >= options.budget) exhausted = true;
  if (!std::isfinite(diff)) diff = 0.0;

  // Close [0, core] with a power law S(t) ~ S(core) (t / core)^p fitted to
  // the spheres at core and 2 core. The disagreement with the constant
  // extrapolation enters the error estimate.
  const std::uint64_t remaining = options.budget > evaluations ? options.budget - evaluations : 0;
  const SphereValue s1 = sphere_value(g, a, core, options, options.sphere_samples_in_ball, stream, remaining);
  const SphereValue s2 =
      sphere_value(g, a, 2.0 * core, options, options.sphere_samples_in_ball, stream, remaining);
  evaluations += s1.evaluations + s2.evaluations;
  const double flat = core * s1.value;
  double tail = flat;
  if (s1.value != 0.0 && s2.value != 0.0 && (s1.value > 0) == (s2.value > 0)) {
    const double p = std::log2(s2.value / s1.value);
    if (std::isfinite(p) && p > -0.999) tail = flat / (p + 1.0);
  }
  const double tail_error = std::abs(tail - flat) + core * s1.error;

  QuadratureResult out;
  out.value = total + tail;
  const double abs_scale = shells_abs.value() + inner.abs_value + std::abs(tail);
  out.error_estimate = 3.0 * diff + shells_err.value() + inner.error + tail_error + 64.0 * kEps * abs_scale;
  out.evaluations = evaluations;
  out.method = QuadratureMethod::radial_composition;
  out.seed = a.size() == 2 ? 0 : options.seed;
  out.budget_exhausted = exhausted;
  return out;
}

QuadratureResult ball_integral_monte_carlo(const ScalarField& g, std::span<const double> a, double r,
                                           const QuadratureOptions& options) {
  check_dimension(a);
  if (!(r > 0.0)) throw InvalidArgument("ball radius must be positive");
  const std::size_t n = a.size();
  const std::size_t samples = std::max<std::size_t>(options.ball_mc_samples, 2);
  const double area = unit_sphere_area(static_cast<int>(n));
  CounterRng rng(options.seed, 0xba11);
  Vec x(n);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = r * (1.0 - rng.uniform());  // (0, r]
    const Vec u = rng.unit_vector(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = a[k] + t * u[k];
    const double v = checked(g, x) * r * area * std::pow(t, static_cast<double>(n - 1));
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  QuadratureResult out;
  out.value = mean;
  const double var = m2 / static_cast<double>(samples - 1);
  out.error_estimate = 3.0 * std::sqrt(var / static_cast<double>(samples)) + 64.0 * kEps * std::abs(mean);
  out.evaluations = samples;
  out.method = QuadratureMethod::monte_carlo;
  out.seed = options.seed;
  return out;
}

QuadratureResult box_integral(const ScalarField& g, std::span<const double> low,
                              std::span<const double> high, const QuadratureOptions& options) {
  check_dimension(low);
  if (low.size() != high.size()) throw InvalidArgument("box corners differ in dimension");
  const std::size_t n = low.size();
  const std::size_t fine = n == 2 ? 64 : (n == 3 ? 32 : 8);
  QuadratureResult out;
  out.method = QuadratureMethod::tensor_gauss;

  auto tensor = [&](std::size_t m, double& abs_value) {
    const Rule& rule = gauss_legendre(m);
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= m;
    if (out.evaluations + total > options.budget) {
      out.budget_exhausted = true;
      abs_value = 0.0;
      return 0.0;
    }
    Vec x(n);
    CompensatedSum sum, abs_sum;
    std::vector<std::size_t> idx(n, 0);
    for (std::size_t k = 0; k < total; ++k) {
      double w = 1.0;
      std::size_t rem = k;
      for (std::size_t i = 0; i < n; ++i) {
        idx[i] = rem % m;
        rem /= m;
        const double half = 0.5 * (high[i] - low[i]);
        x[i] = 0.5 * (high[i] + low[i]) + half * rule.nodes[idx[i]];
        w *= half * rule.weights[idx[i]];
      }
      const double v = checked(g, x);
      sum.add(w * v);
      abs_sum.add(w * std::abs(v));
    }
    out.evaluations += total;
    abs_value = abs_sum.value();
    return sum.value();
  };

  double abs_coarse = 0.0, abs_fine = 0.0;
  const double coarse = tensor(fine / 2, abs_coarse);
  const double value = tensor(fine, abs_fine);
  out.value = out.budget_exhausted ? coarse : value;
  out.error_estimate = 3.0 * std::abs(value - coarse) + 64.0 * kEps * std::max(abs_fine, abs_coarse);
  return out;
}

}  // namespace qrlab

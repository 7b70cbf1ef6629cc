#include <cmath>

#include "doctest.h"
#include "qrlab/error.hpp"
#include "qrlab/quadrature.hpp"
#include "qrlab/rng.hpp"

using namespace qrlab;

namespace {

double gamma_volume(int n) { return std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0 + 1.0); }

double sq_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

// Residual must sit inside the reported (3-sigma-level) estimate, with a
// small absolute floor for deterministic rules that converge to roundoff.
void check_within(const QuadratureResult& q, double exact) {
  CAPTURE(q.value);
  CAPTURE(exact);
  CAPTURE(q.error_estimate);
  CHECK(std::abs(q.value - exact) <= q.error_estimate + 1e-12 * std::max(1.0, std::abs(exact)));
}

}  // namespace

TEST_CASE("unit ball volume matches the gamma-function form") {
  for (int n = 1; n <= 12; ++n) CHECK(unit_ball_volume(n) == doctest::Approx(gamma_volume(n)).epsilon(1e-14));
  CHECK(unit_sphere_area(2) == doctest::Approx(2.0 * M_PI));
  CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * M_PI));
}

TEST_CASE("Gauss-Legendre rule integrates polynomials through degree 127") {
  const auto x = gauss_legendre_nodes();
  const auto w = gauss_legendre_weights();
  REQUIRE(x.size() == 64);
  for (int p = 0; p <= 126; p += 2) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], p);
    CHECK(s == doctest::Approx(2.0 / (p + 1)).epsilon(1e-13));
  }
}

TEST_CASE("circle integrals by the periodic trapezoid rule") {
  const Vec a{0.3, -0.2};
  // int_{S(a,t)} (x1 - a1)^2 = pi t^3
  const auto q = sphere_integral([&](std::span<const double> x) { return (x[0] - a[0]) * (x[0] - a[0]); }, a, 0.4);
  CHECK(q.value == doctest::Approx(M_PI * std::pow(0.4, 3)).epsilon(1e-12));
  check_within(q, M_PI * std::pow(0.4, 3));
  CHECK(q.method == QuadratureMethod::sphere_rule);
}

TEST_CASE("ball integrals in the plane against closed forms") {
  const Vec zero{0.0, 0.0};
  const double r = 0.7;
  const auto one = ball_integral([](std::span<const double>) { return 1.0; }, zero, r);
  CHECK(one.value == doctest::Approx(M_PI * r * r).epsilon(1e-10));
  check_within(one, M_PI * r * r);
  // int_B |x|^2 = 2 pi r^4 / 4
  const auto quad = ball_integral(sq_norm, zero, r);
  CHECK(quad.value == doctest::Approx(M_PI * std::pow(r, 4) / 2.0).epsilon(1e-10));
  // Integrable singularity |x|^{-1}: int_B = 2 pi r
  const auto sing = ball_integral([](std::span<const double> x) { return 1.0 / std::sqrt(sq_norm(x)); }, zero, r);
  CHECK(sing.value == doctest::Approx(2.0 * M_PI * r).epsilon(1e-8));
  check_within(sing, 2.0 * M_PI * r);
  // |x|^{-1.4}: int_B = 2 pi r^{0.6} / 0.6
  const auto strong = ball_integral([](std::span<const double> x) { return std::pow(sq_norm(x), -0.7); }, zero, r);
  const double strong_exact = 2.0 * M_PI * std::pow(r, 0.6) / 0.6;
  CHECK(strong.value == doctest::Approx(strong_exact).epsilon(1e-6));
  check_within(strong, strong_exact);
}

TEST_CASE("ball integral scaling law") {
  const Vec a{0.1, 0.2};
  auto g = [](std::span<const double> x) { return std::exp(x[0]) * std::cos(x[1]); };
  const double r = 0.35;
  const auto big = ball_integral(g, a, r);
  const auto unit = ball_integral([&](std::span<const double> y) {
    return g(Vec{a[0] + r * y[0], a[1] + r * y[1]});
  }, Vec{0.0, 0.0}, 1.0);
  CHECK(big.value == doctest::Approx(r * r * unit.value).epsilon(1e-11));
  // Harmonic integrand: mean value property gives |B| g(a).
  CHECK(big.value == doctest::Approx(M_PI * r * r * g(a)).epsilon(1e-10));
}

TEST_CASE("three-dimensional ball integrals are within their error estimate") {
  const Vec zero{0.0, 0.0, 0.0};
  const double r = 0.5;
  QuadratureOptions opt;
  opt.seed = 11;
  const double exact = 4.0 * M_PI * std::pow(r, 5) / 5.0;
  const auto q = ball_integral(sq_norm, zero, r, opt);
  check_within(q, exact);
  const auto mc = ball_integral_monte_carlo(sq_norm, zero, r, opt);
  CHECK(mc.method == QuadratureMethod::monte_carlo);
  check_within(mc, exact);
  // Anisotropic integrand: int_B x1^2 = exact / 3.
  const auto an = ball_integral([](std::span<const double> x) { return x[0] * x[0]; }, zero, r, opt);
  check_within(an, exact / 3.0);
}

TEST_CASE("Monte Carlo error estimate is calibrated") {
  // Across independent seeds, residuals should stay within 3 sigma almost
  // always and exceed 1 sigma a fair share of the time.
  const Vec zero{0.0, 0.0};
  int within = 0, above_sigma = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    QuadratureOptions opt;
    opt.seed = seed;
    opt.ball_mc_samples = 4000;
    const auto q = ball_integral_monte_carlo(sq_norm, zero, 1.0, opt);
    const double resid = std::abs(q.value - M_PI / 2.0);
    if (resid <= q.error_estimate) ++within;
    if (resid > q.error_estimate / 3.0) ++above_sigma;
  }
  CHECK(within >= 57);
  CHECK(above_sigma >= 8);
  CHECK(above_sigma <= 35);
}

TEST_CASE("seeded integrals are bitwise reproducible") {
  const Vec zero{0.0, 0.0, 0.0};
  QuadratureOptions opt;
  opt.seed = 5;
  auto g = [](std::span<const double> x) { return std::exp(-x[0]) + x[1] * x[2]; };
  const auto a = ball_integral(g, zero, 0.4, opt);
  const auto b = ball_integral(g, zero, 0.4, opt);
  CHECK(a.value == b.value);
  CHECK(a.error_estimate == b.error_estimate);
  const auto c = ball_integral_monte_carlo(g, zero, 0.4, opt);
  const auto d = ball_integral_monte_carlo(g, zero, 0.4, opt);
  CHECK(c.value == d.value);
}

TEST_CASE("box integral of a tensor polynomial") {
  const Vec lo{-1.0, 0.0, 0.5}, hi{0.5, 2.0, 1.0};
  // int x^2 y z = [x^3/3] [y^2/2] [z^2/2]
  const double exact = ((0.125 + 1.0) / 3.0) * 2.0 * ((1.0 - 0.25) / 2.0);
  const auto q = box_integral([](std::span<const double> x) { return x[0] * x[0] * x[1] * x[2]; }, lo, hi);
  CHECK(q.value == doctest::Approx(exact).epsilon(1e-13));
}

TEST_CASE("budget exhaustion is reported") {
  QuadratureOptions opt;
  opt.budget = 100;
  const auto q = ball_integral([](std::span<const double> x) { return std::pow(sq_norm(x), -0.9); }, Vec{0.0, 0.0}, 1.0, opt);
  CHECK(q.budget_exhausted);
}

TEST_CASE("non-finite integrands raise") {
  CHECK_THROWS_AS(ball_integral([](std::span<const double>) { return std::nan(""); }, Vec{0.0, 0.0}, 1.0), NumericalError);
  CHECK_THROWS_AS(ball_integral([](std::span<const double>) { return 1.0; }, Vec{0.0, 0.0}, -1.0), InvalidArgument);
}

TEST_CASE("constant integrands scale with the volume and area") {
  CounterRng rng(12);
  for (int n : {2, 3, 4}) {
    for (int trial = 0; trial < 10; ++trial) {
      const double c = rng.uniform(-5.0, 5.0);
      const double r = rng.uniform(0.01, 2.0);
      const double t = rng.uniform(0.01, 2.0);
      const Vec a(static_cast<std::size_t>(n), 0.3);
      auto g = [c](std::span<const double>) { return c; };
      QuadratureOptions opt;
      opt.seed = static_cast<std::uint64_t>(trial);
      const auto b = ball_integral(g, a, r, opt);
      const auto s = sphere_integral(g, a, t, opt);
      CHECK(b.value == doctest::Approx(c * unit_ball_volume(n) * std::pow(r, n)).epsilon(1e-10));
      CHECK(s.value == doctest::Approx(c * n * unit_ball_volume(n) * std::pow(t, n - 1)).epsilon(1e-12));
    }
  }
}

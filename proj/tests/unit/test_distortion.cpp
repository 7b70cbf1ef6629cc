#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "qrlab/catalog.hpp"
#include "qrlab/distortion.hpp"
#include "qrlab/error.hpp"
#include "qrlab/rng.hpp"

using namespace qrlab;

namespace {

double brute_k2(std::span<const DistortionSample> s, double k1) {
  double best = 0.0;
  for (const auto& x : s) best = std::max(best, x.b - k1 * x.a);
  return best;
}

std::vector<DistortionSample> random_samples(CounterRng& rng) {
  const std::size_t count = 1 + rng.next_u64() % 10;
  std::vector<DistortionSample> s(count);
  for (auto& x : s) {
    x.a = rng.uniform() < 0.15 ? 0.0 : rng.uniform(0.0, 3.0);
    x.b = rng.uniform(0.0, 5.0);
  }
  return s;
}

}  // namespace

TEST_CASE("frontier equals the brute-force envelope on random sample sets") {
  CounterRng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = random_samples(rng);
    const DistortionFrontier fr = fit_minimal_distortion(s);
    for (int i = 0; i <= 2000; ++i) {
      const double k1 = 5e-4 * i * 5.0;
      CHECK(fr.minimal_k2(k1) == doctest::Approx(brute_k2(s, k1)).epsilon(1e-12).scale(1.0));
    }
    // Convex and nonincreasing at the breakpoints.
    const auto bp = fr.breakpoints();
    for (std::size_t i = 1; i < bp.size(); ++i) {
      CHECK(bp[i].k1 > bp[i - 1].k1);
      CHECK(bp[i].k2 <= bp[i - 1].k2 + 1e-12);
    }
  }
}

TEST_CASE("minimal K1 agrees with a grid search") {
  CounterRng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = random_samples(rng);
    const DistortionFrontier fr = fit_minimal_distortion(s);
    for (double k2 : {0.0, 0.5, 2.0}) {
      const double fitted = fr.minimal_k1(k2);
      double grid = std::numeric_limits<double>::infinity();
      for (int i = 1; i <= 40000; ++i) {
        if (brute_k2(s, 5e-4 * i) <= k2) {
          grid = 5e-4 * i;
          break;
        }
      }
      if (std::isinf(grid)) {
        CHECK((std::isinf(fitted) || fitted > 20.0 - 5e-4));
      } else {
        CHECK(fitted <= grid + 1e-12);
        CHECK(fitted >= grid - 5e-4 - 1e-12);
      }
    }
  }
}

TEST_CASE("infeasible K2 = 0 with a zero-Jacobian sample") {
  std::vector<DistortionSample> s(2);
  s[0].a = 0.0;
  s[0].b = 1.0;
  s[1].a = 1.0;
  s[1].b = 2.0;
  const DistortionFrontier fr = fit_minimal_distortion(s);
  CHECK(std::isinf(fr.minimal_k1(0.0)));
  CHECK(fr.minimal_k1(1.0) == doctest::Approx(1.0));
  CHECK(fr.minimal_k2(100.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(fit_minimal_distortion(std::vector<DistortionSample>{}), InvalidArgument);
}

TEST_CASE("radial stretch samples recover K1 = 1/alpha") {
  for (double alpha : {0.3, 0.5, 0.7}) {
    const MappingSpec f = catalog_lookup("radial_stretch", {{"alpha", alpha}});
    const auto s = draw_distortion_samples(f, f.domain, 2000, 17);
    CHECK(fit_minimal_distortion(s).minimal_k1(0.0) == doctest::Approx(1.0 / alpha).epsilon(1e-9));
  }
}

TEST_CASE("verify_distortion on catalog maps with their declared pairs") {
  for (const char* name : {"identity", "radial_stretch", "winding", "rank_deficient", "linear"}) {
    CAPTURE(name);
    ParamMap params;
    if (std::string(name) == "radial_stretch") params["alpha"] = 0.3;
    if (std::string(name) == "winding") params["k"] = 2.0;
    if (std::string(name) == "linear") params = {{"a11", 1.5}, {"a12", 0.4}, {"a21", -0.2}, {"a22", 0.8}};
    const MappingSpec f = catalog_lookup(name, params);
    const DistortionVerification v = verify_distortion(f, f.domain, *f.declared_distortion, 5000, 3);
    CHECK(v.pass());
    CHECK(v.sample_count == 5000);
  }
}

TEST_CASE("an infeasible pair is caught with a located witness") {
  const MappingSpec f = catalog_lookup("radial_stretch", {{"alpha", 0.5}});
  const DistortionVerification v = verify_distortion(f, f.domain, DistortionPair(1.5, 0.0), 2000, 3);
  CHECK_FALSE(v.inequality_holds());
  CHECK(v.sign.consistent);
  CHECK(v.violation_fraction == doctest::Approx(1.0));
  CHECK(v.worst_point.size() == 2);
}

TEST_CASE("sign verdict flags mixed Jacobians") {
  std::vector<DistortionSample> s(3);
  s[0].jacobian_signed = 1.0;
  s[1].jacobian_signed = -0.5;
  s[2].jacobian_signed = 1e-15;
  const SignVerdict v = jacobian_sign_verdict(s);
  CHECK_FALSE(v.consistent);
  CHECK(v.positive == 1);
  CHECK(v.negative == 1);
  CHECK(v.tau == doctest::Approx(1e-9));
}

TEST_CASE("distortion pair validation") {
  CHECK_THROWS_AS(DistortionPair(0.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(DistortionPair(1.0, -1.0), InvalidArgument);
  CHECK_THROWS_AS(DistortionPair(std::numeric_limits<double>::infinity(), 0.0), InvalidArgument);
}

TEST_CASE("frontier pairs are feasible for every sample") {
  CounterRng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = random_samples(rng);
    const DistortionFrontier fr = fit_minimal_distortion(s);
    for (int k = 0; k < 100; ++k) {
      const double k1 = rng.uniform(0.01, 10.0);
      const DistortionPair p(k1, fr.minimal_k2(k1));
      for (const auto& x : s) CHECK(distortion_residual(x, p) <= 1e-12);
    }
  }
}

TEST_CASE("residuals are monotone under pair dominance") {
  CounterRng rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    DistortionSample x;
    x.a = rng.uniform(0.0, 3.0);
    x.b = rng.uniform(0.0, 5.0);
    const DistortionPair q(rng.uniform(0.1, 3.0), rng.uniform(0.0, 2.0));
    const DistortionPair p(q.k1() + rng.uniform(0.0, 1.0), q.k2() + rng.uniform(0.0, 1.0));
    CHECK(distortion_residual(x, p) <= distortion_residual(x, q));
  }
}

TEST_CASE("scaling the mapping leaves the fitted K1 unchanged") {
  for (const char* sel : {"radial_stretch:alpha=0.5", "winding:k=3", "linear:a11=1.5,a12=0.4,a21=-0.2,a22=0.8"}) {
    CAPTURE(sel);
    const auto [name, params] = parse_map_selector(sel);
    const MappingSpec f = catalog_lookup(name, params);
    MappingSpec g = f;
    const double c = -2.5;
    g.evaluate = [f, c](std::span<const double> x) {
      Vec y = f.evaluate(x);
      for (double& v : y) v *= c;
      return y;
    };
    g.exact_differential = [f, c](std::span<const double> x) { return c * f.exact_differential(x); };
    const auto sf = draw_distortion_samples(f, f.domain, 500, 4);
    const auto sg = draw_distortion_samples(g, g.domain, 500, 4);
    for (std::size_t i = 0; i < sf.size(); ++i) {
      CHECK(sg[i].a == doctest::Approx(c * c * sf[i].a));
      CHECK(sg[i].b == doctest::Approx(c * c * sf[i].b));
    }
    CHECK(fit_minimal_distortion(sg).minimal_k1(0.0) ==
          doctest::Approx(fit_minimal_distortion(sf).minimal_k1(0.0)).epsilon(1e-12));
  }
}

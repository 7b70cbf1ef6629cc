#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qrlab/domain.hpp"
#include "qrlab/error.hpp"
#include "qrlab/linalg.hpp"
#include "qrlab/rng.hpp"

using namespace qrlab;

TEST_CASE("boundary distance: ball and box closed forms") {
  const auto ball = DomainRegion::ball({0.0, 0.0}, 1.0);
  CHECK(ball.boundary_distance(Vec{0.0, 0.0}) == doctest::Approx(1.0));
  CHECK(ball.boundary_distance(Vec{0.4, 0.0}) == doctest::Approx(0.6));
  const auto box = DomainRegion::box({-1.0, -1.0}, {1.0, 1.0});
  CHECK(box.boundary_distance(Vec{0.5, 0.0}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(ball.boundary_distance(Vec{2.0, 0.0}), DomainError);
}

TEST_CASE("regions reject invalid geometry") {
  CHECK_THROWS_AS(DomainRegion::ball({0.0}, 1.0), InvalidArgument);
  CHECK_THROWS_AS(DomainRegion::ball({0.0, 0.0}, 0.0), InvalidArgument);
  CHECK_THROWS_AS(DomainRegion::box({0.0, 0.0}, {1.0, 0.0}), InvalidArgument);
}

TEST_CASE("boundary distance is 1-Lipschitz on random pairs") {
  const auto box = DomainRegion::box({-1.0, -2.0, 0.0}, {1.0, 2.0, 0.5});
  const auto ball = DomainRegion::ball({0.3, -0.2, 0.1}, 2.0);
  CounterRng rng(11);
  for (int i = 0; i < 2000; ++i) {
    for (const DomainRegion* r : {&box, &ball}) {
      const Vec x = r->sample_uniform(rng);
      const Vec y = r->sample_uniform(rng);
      CHECK(std::abs(r->boundary_distance(x) - r->boundary_distance(y)) <= distance(x, y) + 1e-12);
    }
  }
}

TEST_CASE("uniform ball samples fill the ball with the right radial law") {
  // P(|x| <= r/2) = 2^-n for uniform sampling.
  const auto ball = DomainRegion::ball({0.0, 0.0, 0.0}, 1.0);
  CounterRng rng(5);
  int inner = 0;
  const int total = 40000;
  for (int i = 0; i < total; ++i) {
    const Vec x = ball.sample_uniform(rng);
    REQUIRE(norm(x) <= 1.0);
    if (norm(x) <= 0.5) ++inner;
  }
  const double p = static_cast<double>(inner) / total;
  CHECK(std::abs(p - 0.125) < 4.0 * std::sqrt(0.125 * 0.875 / total));
}

TEST_CASE("inset distance of nested regions") {
  const auto omega = DomainRegion::ball({0.0, 0.0}, 1.0);
  CHECK(inset_distance(DomainRegion::ball({0.0, 0.0}, 0.5), omega) == doctest::Approx(0.5));
  CHECK(inset_distance(DomainRegion::ball({0.2, 0.0}, 0.5), omega) == doctest::Approx(0.3));
  // Box corner is the closest point to the sphere.
  const double c = 0.5;
  CHECK(inset_distance(DomainRegion::box({-c, -c}, {c, c}), omega) == doctest::Approx(1.0 - c * std::numbers::sqrt2));
  CHECK_THROWS_AS(inset_distance(DomainRegion::ball({0.6, 0.0}, 0.5), omega), DomainError);
}

TEST_CASE("counter rng is reproducible per stream") {
  CounterRng a(42, 3), b(42, 3), c(42, 4);
  for (int i = 0; i < 10; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(2, 1));
}

TEST_CASE("unit vectors are unit and centered") {
  CounterRng rng(9);
  Vec mean(4, 0.0);
  const int total = 20000;
  for (int i = 0; i < total; ++i) {
    const Vec u = rng.unit_vector(4);
    CHECK(norm(u) == doctest::Approx(1.0).epsilon(1e-14));
    for (int k = 0; k < 4; ++k) mean[k] += u[k] / total;
  }
  // Each coordinate has variance 1/n.
  for (double m : mean) CHECK(std::abs(m) < 4.0 * std::sqrt(0.25 / total));
}

TEST_CASE("compensated sum recovers cancellation") {
  CompensatedSum s;
  s.add(1.0);
  s.add(1e100);
  s.add(1.0);
  s.add(-1e100);
  CHECK(s.value() == 2.0);
}

#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "qrlab/catalog.hpp"
#include "qrlab/differential.hpp"
#include "qrlab/error.hpp"
#include "qrlab/grid.hpp"

using namespace qrlab;

namespace {

const char* kSelectors[] = {
    "identity", "translate:b1=0.25,b2=-0.1", "linear:a11=1.5,a12=0.4,a21=-0.2,a22=0.8",
    "radial_stretch:alpha=0.3", "radial_stretch:alpha=0.5", "radial_stretch:alpha=0.7,n=3",
    "winding:k=2", "winding:k=3", "rank_deficient", "identity:n=4"};

MappingSpec lookup(const std::string& selector) {
  const auto [name, params] = parse_map_selector(selector);
  return catalog_lookup(name, params);
}

// Brute-force |A| over a fine grid of unit directions in the plane.
double plane_operator_norm(const SquareMatrix& a) {
  double best = 0.0;
  for (int k = 0; k < 200000; ++k) {
    const double t = 2.0 * M_PI * k / 200000.0;
    const Vec u{std::cos(t), std::sin(t)};
    best = std::max(best, norm(a.apply(u)));
  }
  return best;
}

}  // namespace

TEST_CASE("radial stretch closed forms") {
  const MappingSpec f = lookup("radial_stretch:alpha=0.5");
  const Vec y = f(Vec{0.25, 0.0});
  CHECK(y[0] == doctest::Approx(0.5));
  CHECK(y[1] == doctest::Approx(0.0));
  const SquareMatrix d = f.exact_differential(Vec{0.25, 0.0});
  CHECK(operator_norm(d) == doctest::Approx(2.0));
  CHECK(jacobian_det(d) == doctest::Approx(2.0));
  CHECK(plane_operator_norm(d) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(f.declared_distortion->k1() == doctest::Approx(2.0));
  CHECK(f.declared_distortion->k2() == 0.0);
  CHECK(*f.declared_holder == 0.5);
  // |f(x) - f(0)| = |x|^alpha.
  CHECK(norm(f(Vec{0.09, 0.12})) == doctest::Approx(std::pow(0.15, 0.5)));
  CHECK_THROWS_AS(f.exact_differential(Vec{0.0, 0.0}), SingularPointError);
}

TEST_CASE("winding singular values are {1, k}") {
  const MappingSpec f = lookup("winding:k=3");
  const auto sv = singular_values(f.exact_differential(Vec{0.3, -0.4}));
  CHECK(sv[0] == doctest::Approx(3.0));
  CHECK(sv[1] == doctest::Approx(1.0));
  CHECK(jacobian_det(f.exact_differential(Vec{-0.2, 0.1})) == doctest::Approx(3.0));
}

TEST_CASE("rank deficient entry") {
  const MappingSpec f = lookup("rank_deficient");
  const SquareMatrix d = f.exact_differential(Vec{0.3, 0.2});
  CHECK(jacobian_det(d) == 0.0);
  CHECK(operator_norm(d) == doctest::Approx(std::abs(std::cos(0.3))));
  CHECK(f.declared_distortion->k1() == 1.0);
  CHECK(f.declared_distortion->k2() == 1.0);
}

TEST_CASE("catalog rejects bad names and parameters") {
  CHECK_THROWS_AS(catalog_lookup("nope"), InvalidArgument);
  CHECK_THROWS_AS(catalog_lookup("radial_stretch", {{"alpha", 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(catalog_lookup("radial_stretch", {{"alpha", 0.0}}), InvalidArgument);
  CHECK_THROWS_AS(catalog_lookup("radial_stretch"), InvalidArgument);
  CHECK_THROWS_AS(catalog_lookup("winding", {{"k", 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(catalog_lookup("winding", {{"k", 2.0}, {"n", 3.0}}), InvalidArgument);
  CHECK_THROWS_AS(catalog_lookup("identity", {{"bogus", 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(parse_map_selector("radial_stretch:alpha"), InvalidArgument);
  CHECK_THROWS_AS(parse_map_selector("radial_stretch:alpha=x"), InvalidArgument);
}

TEST_CASE("selector round trip") {
  for (const char* s : kSelectors) {
    const MappingSpec f = lookup(s);
    const MappingSpec g = lookup(map_selector(f));
    CHECK(g.name == f.name);
    CHECK(g.params == f.params);
  }
}

TEST_CASE("linear declared pair") {
  const MappingSpec f = lookup("linear:a11=2,a22=0.5,a12=0.3");
  const SquareMatrix a{{2.0, 0.3}, {0.0, 0.5}};
  const double op = plane_operator_norm(a);
  CHECK(f.declared_distortion->k1() == doctest::Approx(op * op / 1.0).epsilon(1e-9));
  const MappingSpec singular = lookup("linear:a11=1,a12=2,a21=0.5,a22=1");
  CHECK(singular.declared_distortion->k1() == 1.0);
  CHECK(singular.declared_distortion->k2() == doctest::Approx(std::pow(operator_norm(SquareMatrix{{1, 2}, {0.5, 1}}), 2)));
}

TEST_CASE("finite differences converge at second order to the exact differential") {
  for (const char* s : kSelectors) {
    CAPTURE(s);
    const MappingSpec f = lookup(s);
    CounterRng rng(3);
    int checked = 0;
    for (int i = 0; i < 100; ++i) {
      Vec x = sample_regular_point(f, f.domain, rng);
      if (f.domain.boundary_distance(x) < 0.05 || f.singular_distance(x) < 0.05) continue;
      const SquareMatrix exact = f.exact_differential(x);
      const double h = 1e-3;
      const double e1 = (finite_difference_differential(f, x, h) - exact).max_abs_entry();
      const double e2 = (finite_difference_differential(f, x, h / 2) - exact).max_abs_entry();
      if (e1 < 1e-9) {
        CHECK(e2 < 1e-9);  // affine: exact up to roundoff
        continue;
      }
      const double ratio = e1 / e2;
      CHECK(ratio >= 3.5);
      CHECK(ratio <= 4.5);
      ++checked;
    }
    if (f.name == "radial_stretch" || f.name == "winding" || f.name == "rank_deficient") CHECK(checked > 50);
  }
}

TEST_CASE("jacobian sign is constant for every catalog entry") {
  for (const char* s : kSelectors) {
    CAPTURE(s);
    const MappingSpec f = lookup(s);
    CounterRng rng(21);
    int pos = 0, neg = 0;
    for (int i = 0; i < 10000; ++i) {
      const double j = sample_differential(f, sample_regular_point(f, f.domain, rng)).jacobian;
      if (j > 1e-12) ++pos;
      if (j < -1e-12) ++neg;
    }
    CHECK((pos == 0 || neg == 0));
  }
}

TEST_CASE("catalog listing and dimension filter metadata") {
  bool has_radial = false, winding_2d_only = false;
  for (const auto& e : catalog_entries()) {
    if (e.name == "radial_stretch") has_radial = e.declared_pair.find("1/alpha") != std::string::npos;
    if (e.name == "winding") winding_2d_only = e.only_dimension && *e.only_dimension == 2;
  }
  CHECK(has_radial);
  CHECK(winding_2d_only);
}

TEST_CASE("grid round trip reproduces affine maps exactly") {
  const auto dir = std::filesystem::temp_directory_path() / "qrlab_grid_test";
  std::filesystem::create_directories(dir);
  const MappingSpec f = lookup("linear:a11=1.5,a12=0.4,a21=-0.2,a22=0.8");
  GridMeta meta;
  meta.n = 2;
  meta.shape = {9, 7};
  meta.spacing = {0.25, 0.3};
  meta.origin = {-1.0, -0.9};
  write_grid(sample_on_grid(f, meta), dir / "g.csv", dir / "g.json");
  const MappingSpec g = load_grid_mapping(dir / "g.csv", dir / "g.json");
  CHECK(g.n == 2);
  CHECK_FALSE(g.has_exact_differential());
  CounterRng rng(2);
  for (int i = 0; i < 500; ++i) {
    const Vec x = g.domain.sample_uniform(rng);
    const Vec a = f(x), b = g(x);
    CHECK(distance(a, b) < 1e-12);
  }
  const DifferentialSample ds = sample_differential(g, Vec{0.1, 0.2});
  CHECK((ds.matrix - f.exact_differential(Vec{0.1, 0.2})).max_abs_entry() < 1e-9);
  CHECK(ds.provenance == Provenance::finite_difference);
}

TEST_CASE("grid interpolation is multilinear between nodes") {
  // f = x1 * x2 is reproduced exactly by bilinear interpolation.
  GridSamples s;
  s.meta.n = 2;
  s.meta.shape = {3, 3};
  s.meta.spacing = {1.0, 1.0};
  s.meta.origin = {0.0, 0.0};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s.values.push_back(Vec{double(i * j), 0.0});
  const MappingSpec g = grid_mapping(s);
  CHECK(g(Vec{0.5, 1.5})[0] == doctest::Approx(0.75));
  CHECK(g(Vec{1.25, 0.5})[0] == doctest::Approx(0.625));
}

TEST_CASE("grid sidecar accepts a scalar spacing and rejects malformed files") {
  const auto dir = std::filesystem::temp_directory_path() / "qrlab_grid_test2";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "m.json") << R"({"n": 2, "grid_shape": [2, 2], "spacing": 0.5, "origin": [0, 0]})";
    std::ofstream(dir / "g.csv") << "x1,x2,f1,f2\n0,0,0,0\n0,0.5,0,1\n0.5,0,1,0\n0.5,0.5,1,1\n";
  }
  const MappingSpec g = load_grid_mapping(dir / "g.csv", dir / "m.json");
  CHECK(g(Vec{0.25, 0.25})[0] == doctest::Approx(0.5));
  {
    std::ofstream(dir / "bad.csv") << "x1,x2,f1,f2\n0,0,0,0\n";
  }
  CHECK_THROWS_AS(load_grid_mapping(dir / "bad.csv", dir / "m.json"), InvalidArgument);
}

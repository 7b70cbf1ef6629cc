#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "qrlab/catalog.hpp"
#include "qrlab/differential.hpp"
#include "qrlab/error.hpp"
#include "qrlab/rng.hpp"

using namespace qrlab;

namespace {

SquareMatrix random_matrix(std::size_t n, CounterRng& rng) {
  SquareMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.uniform(-2.0, 2.0);
  return a;
}

// Leibniz permutation expansion.
double leibniz_det(const SquareMatrix& a) {
  const std::size_t n = a.dim();
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  double det = 0.0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (p[i] > p[j]) ++inversions;
    double term = inversions % 2 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) term *= a(i, p[i]);
    det += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return det;
}

// sup |A u| by power iteration on A^T A from many starts.
double power_norm(const SquareMatrix& a) {
  const SquareMatrix ata = a.transposed() * a;
  CounterRng rng(77);
  double best = 0.0;
  for (int start = 0; start < 8; ++start) {
    Vec v = rng.unit_vector(a.dim());
    for (int it = 0; it < 2000; ++it) {
      Vec w = ata.apply(v);
      const double nw = norm(w);
      if (nw == 0.0) break;
      for (double& x : w) x /= nw;
      v = w;
    }
    best = std::max(best, norm(a.apply(v)));
  }
  return best;
}

}  // namespace

TEST_CASE("operator norm matches power iteration and direction sampling") {
  CounterRng rng(1);
  for (std::size_t n : {2u, 3u, 4u, 5u}) {
    for (int trial = 0; trial < 50; ++trial) {
      const SquareMatrix a = random_matrix(n, rng);
      const double op = operator_norm(a);
      CHECK(op == doctest::Approx(power_norm(a)).epsilon(1e-9));
      for (int k = 0; k < 200; ++k) CHECK(norm(a.apply(rng.unit_vector(n))) <= op * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("singular values: product equals |det|, squares sum to the Frobenius norm") {
  CounterRng rng(2);
  for (std::size_t n : {2u, 3u, 4u, 6u}) {
    for (int trial = 0; trial < 30; ++trial) {
      const SquareMatrix a = random_matrix(n, rng);
      const auto sv = singular_values(a);
      REQUIRE(sv.size() == n);
      CHECK(std::is_sorted(sv.rbegin(), sv.rend()));
      double prod = 1.0, sq = 0.0, fro = 0.0;
      for (double s : sv) {
        prod *= s;
        sq += s * s;
      }
      for (double x : a.row_major()) fro += x * x;
      CHECK(prod == doctest::Approx(std::abs(leibniz_det(a))).epsilon(1e-9));
      CHECK(sq == doctest::Approx(fro).epsilon(1e-12));
    }
  }
}

TEST_CASE("determinant agrees with the permutation expansion") {
  CounterRng rng(3);
  for (std::size_t n : {2u, 3u, 4u, 5u, 6u}) {
    for (int trial = 0; trial < 30; ++trial) {
      const SquareMatrix a = random_matrix(n, rng);
      CHECK(jacobian_det(a) == doctest::Approx(leibniz_det(a)).epsilon(1e-10));
    }
  }
  CHECK(jacobian_det(SquareMatrix{{1, 2}, {2, 4}}) == 0.0);
}

TEST_CASE("non-finite matrices are rejected") {
  SquareMatrix a = SquareMatrix::identity(2);
  a(0, 1) = std::nan("");
  CHECK_THROWS_AS(operator_norm(a), NumericalError);
  CHECK_THROWS_AS(jacobian_det(a), NumericalError);
}

TEST_CASE("sample_differential provenance and refusals") {
  const MappingSpec f = catalog_lookup("radial_stretch", {{"alpha", 0.5}});
  const DifferentialSample s = sample_differential(f, Vec{0.25, 0.0});
  CHECK(s.provenance == Provenance::exact);
  CHECK(s.op_norm == doctest::Approx(2.0));
  CHECK(s.jacobian == doctest::Approx(2.0));
  CHECK_THROWS_AS(sample_differential(f, Vec{0.0, 0.0}), SingularPointError);
  CHECK_THROWS_AS(sample_differential(f, Vec{2.0, 0.0}), DomainError);
  CHECK_THROWS_AS(finite_difference_differential(f, Vec{1e-7, 0.0}, 1e-5), SingularPointError);
  CHECK_THROWS_AS(finite_difference_differential(f, Vec{0.999999, 0.0}, 1e-5), DomainError);
  CHECK_THROWS_AS(sample_differential(f, Vec{0.1, 0.0, 0.0}), InvalidArgument);
}

TEST_CASE("finite-difference differential of the identity") {
  const MappingSpec f = catalog_lookup("identity", {{"n", 3.0}});
  const SquareMatrix d = finite_difference_differential(f, Vec{0.1, -0.2, 0.3}, 1e-5);
  CHECK((d - SquareMatrix::identity(3)).max_abs_entry() < 1e-10);
  CHECK(default_fd_step(Vec{3.0, 4.0}) == doctest::Approx(5e-5));
  CHECK(default_fd_step(Vec{0.1, 0.0}) == doctest::Approx(1e-5));
}

TEST_CASE("operator norm invariants") {
  CounterRng rng(4);
  for (std::size_t n : {2u, 3u, 4u}) {
    for (int trial = 0; trial < 40; ++trial) {
      const SquareMatrix a = random_matrix(n, rng);
      const double op = operator_norm(a);
      CHECK(std::abs(operator_norm(a.transposed()) - op) <= 1e-10 * std::max(1.0, op));
      const double c = rng.uniform(-3.0, 3.0);
      CHECK(operator_norm(c * a) == doctest::Approx(std::abs(c) * op).epsilon(1e-12));
      CHECK(std::abs(jacobian_det(a)) <= std::pow(op, static_cast<double>(n)) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("orthogonal matrices from Gram-Schmidt have unit norm and determinant") {
  CounterRng rng(5);
  for (std::size_t n : {2u, 3u, 5u}) {
    for (int trial = 0; trial < 20; ++trial) {
      const SquareMatrix a = random_matrix(n, rng);
      // Modified Gram-Schmidt on the columns of a.
      std::vector<Vec> q;
      for (std::size_t j = 0; j < n; ++j) {
        Vec v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = a(i, j);
        for (const Vec& u : q) {
          double dot = 0.0;
          for (std::size_t i = 0; i < n; ++i) dot += u[i] * v[i];
          for (std::size_t i = 0; i < n; ++i) v[i] -= dot * u[i];
        }
        const double nv = norm(v);
        for (double& x : v) x /= nv;
        q.push_back(v);
      }
      SquareMatrix m(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = q[j][i];
      CHECK(std::abs(operator_norm(m) - 1.0) <= 1e-10);
      CHECK(std::abs(std::abs(jacobian_det(m)) - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("direction-sampling oracle brackets the operator norm") {
  CounterRng rng(6);
  for (std::size_t n : {2u, 3u}) {
    for (int trial = 0; trial < 100; ++trial) {
      const SquareMatrix a = random_matrix(n, rng);
      const double op = operator_norm(a);
      double best = 0.0;
      for (int k = 0; k < 100000; ++k) best = std::max(best, norm(a.apply(rng.unit_vector(n))));
      CHECK(best <= op * (1.0 + 1e-12));
      CHECK(best >= op - 1e-3);
    }
  }
}

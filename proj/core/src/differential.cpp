#include "qrlab/differential.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "qrlab/error.hpp"

namespace qrlab {

namespace {

void require_finite(const SquareMatrix& a, const char* what) {
  if (!a.is_finite()) throw NumericalError(std::string(what) + ": matrix has non-finite entries");
}

// One-sided (Hestenes) cyclic Jacobi: orthogonalize the columns of A by
// plane rotations; the column norms converge to the singular values.
std::vector<double> jacobi_singular_values(const SquareMatrix& a) {
  const std::size_t n = a.dim();
  SquareMatrix u = a;
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < 64; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          alpha += u(i, p) * u(i, p);
          beta += u(i, q) * u(i, q);
          gamma += u(i, p) * u(i, q);
        }
        if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < n; ++i) {
          const double up = u(i, p);
          const double uq = u(i, q);
          u(i, p) = c * up - s * uq;
          u(i, q) = s * up + c * uq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(n);
  for (std::size_t j = 0; j < n; ++j) {
    Vec col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = u(i, j);
    sv[j] = norm(col);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

double lu_determinant(SquareMatrix m) {
  const std::size_t n = m.dim();
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(pivot, k))) pivot = i;
    if (m(pivot, k) == 0.0) return 0.0;
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(pivot, j));
      det = -det;
    }
    det *= m(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = m(i, k) / m(k, k);
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= factor * m(k, j);
    }
  }
  return det;
}

}  // namespace

std::vector<double> singular_values(const SquareMatrix& a) {
  require_finite(a, "singular_values");
  const std::size_t n = a.dim();
  if (n == 0) return {};
  if (n == 1) return {std::abs(a(0, 0))};
  if (n == 2) {
    // sigma_{1,2} = (|(a+d, c-b)| +- |(a-d, c+b)|) / 2, the square roots of
    // the eigenvalues of A^T A written without cancellation.
    const double p = std::hypot(a(0, 0) + a(1, 1), a(1, 0) - a(0, 1));
    const double q = std::hypot(a(0, 0) - a(1, 1), a(1, 0) + a(0, 1));
    return {0.5 * (p + q), 0.5 * std::abs(p - q)};
  }
  return jacobi_singular_values(a);
}

double operator_norm(const SquareMatrix& a) {
  const auto sv = singular_values(a);
  return sv.empty() ? 0.0 : sv.front();
}

double jacobian_det(const SquareMatrix& a) {
  require_finite(a, "jacobian_det");
  switch (a.dim()) {
    case 0:
      return 1.0;
    case 1:
      return a(0, 0);
    case 2:
      return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    case 3:
      return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
             a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
             a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    default:
      return lu_determinant(a);
  }
}

double default_fd_step(std::span<const double> x) { return 1e-5 * std::max(1.0, norm(x)); }

SquareMatrix finite_difference_differential(const MappingSpec& map, std::span<const double> x,
                                            double h) {
  if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  if (x.size() != map.n) throw InvalidArgument("point dimension does not match mapping");
  if (map.domain.boundary_distance(x) < h)
    throw DomainError("finite-difference stencil leaves the domain of '" + map.name + "'");
  if (map.singular_distance(x) <= std::max(kSingularExclusion, h))
    throw SingularPointError("finite-difference stencil reaches a singular point of '" + map.name + "'");
  const std::size_t n = map.n;
  SquareMatrix d(n);
  Vec probe(x.begin(), x.end());
  for (std::size_t j = 0; j < n; ++j) {
    probe[j] = x[j] + h;
    const Vec plus = map(probe);
    probe[j] = x[j] - h;
    const Vec minus = map(probe);
    probe[j] = x[j];
    for (std::size_t i = 0; i < n; ++i) d(i, j) = (plus[i] - minus[i]) / (2.0 * h);
  }
  return d;
}

DifferentialSample sample_differential(const MappingSpec& map, std::span<const double> x,
                                       const DifferentialOptions& options) {
  if (x.size() != map.n) throw InvalidArgument("point dimension does not match mapping");
  DifferentialSample out;
  out.point.assign(x.begin(), x.end());
  if (map.has_exact_differential()) {
    // The closed forms are valid at every non-singular point; only the
    // singular point itself is refused.
    if (map.singular_distance(x) == 0.0)
      throw SingularPointError("differential requested at a singular point of '" + map.name + "'");
    if (!map.domain.contains(x)) throw DomainError("point lies outside the domain of '" + map.name + "'");
    out.matrix = map.exact_differential(x);
    out.provenance = Provenance::exact;
  } else {
    if (map.singular_distance(x) < kSingularExclusion)
      throw SingularPointError("point is within 1e-6 of a singular point of '" + map.name + "'");
    double h = options.fd_step.value_or(default_fd_step(x));
    const double rho = map.domain.boundary_distance(x);
    if (rho < h) h = 0.5 * rho;
    if (!(h > 0.0)) throw DomainError("no room for a finite-difference stencil on the boundary");
    out.matrix = finite_difference_differential(map, x, h);
    out.provenance = Provenance::finite_difference;
    out.step = h;
  }
  require_finite(out.matrix, "sample_differential");
  out.op_norm = operator_norm(out.matrix);
  out.jacobian = jacobian_det(out.matrix);
  return out;
}

}  // namespace qrlab

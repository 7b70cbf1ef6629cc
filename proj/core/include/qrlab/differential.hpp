#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qrlab/linalg.hpp"
#include "qrlab/mapping.hpp"

namespace qrlab {

// Singular values in descending order. Closed form for n = 2, one-sided
// cyclic Jacobi for n >= 3. Throws NumericalError on non-finite input.
std::vector<double> singular_values(const SquareMatrix& a);

// |A| = sup_{|xi|=1} |A xi|, the largest singular value.
double operator_norm(const SquareMatrix& a);

// det A: cofactor expansion for n <= 3, LU with partial pivoting above.
double jacobian_det(const SquareMatrix& a);

// 1e-5 * max(1, |x|).
double default_fd_step(std::span<const double> x);

// Central differences; column j is (f(x + h e_j) - f(x - h e_j)) / 2h.
// Requires B(x, h) inside the domain and x at least max(1e-6, h) away from
// every singular point.
SquareMatrix finite_difference_differential(const MappingSpec& map, std::span<const double> x,
                                            double h);

enum class Provenance { exact, finite_difference };

struct DifferentialSample {
  Vec point;
  SquareMatrix matrix;
  double op_norm = 0.0;
  double jacobian = 0.0;
  Provenance provenance = Provenance::exact;
  double step = 0.0;  // finite-difference step, 0 for exact samples
};

struct DifferentialOptions {
  std::optional<double> fd_step;  // default_fd_step when unset
};

// Uses the exact differential when the mapping has one, otherwise central
// differences. Near the domain boundary the step shrinks to rho(x)/2.
DifferentialSample sample_differential(const MappingSpec& map, std::span<const double> x,
                                       const DifferentialOptions& options = {});

}  // namespace qrlab

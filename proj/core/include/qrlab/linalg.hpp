#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qrlab {

using Vec = std::vector<double>;

double norm(std::span<const double> v);
double distance(std::span<const double> a, std::span<const double> b);
bool all_finite(std::span<const double> v);

// Dense n x n matrix stored row-major. Row i holds the gradient of the
// i-th component when the matrix is a differential.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n);
  SquareMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static SquareMatrix identity(std::size_t n);
  static SquareMatrix from_row_major(std::size_t n, std::vector<double> entries);

  std::size_t dim() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::span<const double> row_major() const { return data_; }

  SquareMatrix transposed() const;
  Vec apply(std::span<const double> x) const;
  bool is_finite() const;
  double max_abs_entry() const;

  friend SquareMatrix operator*(double c, const SquareMatrix& a);
  friend SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b);
  friend SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b);
  friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b);

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

// Neumaier-compensated running sum; the result depends only on the order
// of additions.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace qrlab

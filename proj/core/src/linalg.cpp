#include "qrlab/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "qrlab/error.hpp"

namespace qrlab {

double norm(std::span<const double> v) {
  // Scaled to avoid overflow for |x|^{alpha-1}-sized components.
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double sum = 0.0;
  for (double x : v) {
    const double y = x / scale;
    sum += y * y;
  }
  return scale * std::sqrt(sum);
}

double distance(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  Vec diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  return norm(diff);
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

SquareMatrix::SquareMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

SquareMatrix::SquareMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : n_(rows.size()) {
  data_.reserve(n_ * n_);
  for (const auto& row : rows) {
    if (row.size() != n_) throw InvalidArgument("SquareMatrix: ragged initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

SquareMatrix SquareMatrix::identity(std::size_t n) {
  SquareMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

SquareMatrix SquareMatrix::from_row_major(std::size_t n, std::vector<double> entries) {
  if (entries.size() != n * n) throw InvalidArgument("SquareMatrix: expected n*n entries");
  SquareMatrix m;
  m.n_ = n;
  m.data_ = std::move(entries);
  return m;
}

SquareMatrix SquareMatrix::transposed() const {
  SquareMatrix t(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Vec SquareMatrix::apply(std::span<const double> x) const {
  assert(x.size() == n_);
  Vec y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n_; ++j) acc += (*this)(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

bool SquareMatrix::is_finite() const { return all_finite(data_); }

double SquareMatrix::max_abs_entry() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

SquareMatrix operator*(double c, const SquareMatrix& a) {
  SquareMatrix r = a;
  for (double& x : r.data_) x *= c;
  return r;
}

SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b) {
  assert(a.n_ == b.n_);
  SquareMatrix r = a;
  for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] += b.data_[k];
  return r;
}

SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b) {
  assert(a.n_ == b.n_);
  SquareMatrix r = a;
  for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] -= b.data_[k];
  return r;
}

SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
  assert(a.n_ == b.n_);
  const std::size_t n = a.n_;
  SquareMatrix r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

}  // namespace qrlab

#include "degenwave/dense.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "degenwave/kernels.hpp"

namespace degenwave {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::column_block(std::size_t first, std::size_t count) const {
  if (first + count > cols_) throw std::out_of_range("column_block");
  DenseMatrix out(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    std::copy_n(data_.data() + i * cols_ + first, count, out.data() + i * count);
  return out;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("matrix product: shape");
  DenseMatrix out(rows_, rhs.cols_);
  kernels::gemm(data(), rhs.data(), out.data(), rows_, cols_, rhs.cols_);
  return out;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw std::invalid_argument("matrix sum: shape");
  kernels::axpy(1.0, rhs.data_, data_);
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

void DenseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  kernels::gemv(data(), rows_, cols_, x, y);
}

void DenseMatrix::multiply_add(std::span<const double> x, std::span<double> y) const {
  kernels::gemv_acc(data(), rows_, cols_, x, y);
}

double DenseMatrix::norm1() const {
  std::vector<double> colsum(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) colsum[j] += std::abs((*this)(i, j));
  double m = 0.0;
  for (double c : colsum) {
    if (std::isnan(c)) return c;
    m = std::max(m, c);
  }
  return m;
}

double DenseMatrix::max_abs_diff(const DenseMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw std::invalid_argument("max_abs_diff: shape");
  double m = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i)
    m = std::max(m, std::abs(data_[i] - other.data_[i]));
  return m;
}

}  // namespace degenwave

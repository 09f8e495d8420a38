#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace degenwave {

using Vector = std::vector<double>;

// Row-major dense matrix. Products go through the dispatched kernels.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  const double* data() const { return data_.data(); }
  double* data() { return data_.data(); }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  // Columns [first, first + count) copied into a new matrix.
  DenseMatrix column_block(std::size_t first, std::size_t count) const;

  DenseMatrix operator*(const DenseMatrix& rhs) const;
  DenseMatrix& operator+=(const DenseMatrix& rhs);
  DenseMatrix& operator*=(double s);

  void multiply(std::span<const double> x, std::span<double> y) const;
  void multiply_add(std::span<const double> x, std::span<double> y) const;

  // Maximum absolute column sum.
  double norm1() const;
  double max_abs_diff(const DenseMatrix& other) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace degenwave

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rbffd {

/// Row-major square matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * n_, n_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// In-place LU factorisation with partial (row) pivoting, PA = LU.
///
/// A pivot is rejected when its magnitude falls below `pivot_tol` times the
/// largest magnitude of the corresponding original row; the factorisation then
/// reports the failing column instead of producing a meaningless solve.
class LuFactorization {
 public:
  static constexpr double kDefaultPivotTol = 1e-14;

  explicit LuFactorization(DenseMatrix a, double pivot_tol = kDefaultPivotTol);

  bool ok() const { return failed_column_ < 0; }
  /// Column at which elimination stopped, or -1 on success.
  long failed_column() const { return failed_column_; }

  /// Solves A x = b; requires ok().
  std::vector<double> solve(std::span<const double> b) const;

 private:
  DenseMatrix lu_;
  std::vector<std::size_t> perm_;
  long failed_column_ = -1;
};

}  // namespace rbffd

// SPDX-License-Identifier: Apache-2.0
#include "rbffd/dense_lu.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <utility>

namespace rbffd {

LuFactorization::LuFactorization(DenseMatrix a, double pivot_tol) : lu_(std::move(a)) {
  const std::size_t n = lu_.size();
  perm_.resize(n);
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});

  std::vector<double> row_scale(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (double v : lu_.row(i)) row_scale[i] = std::max(row_scale[i], std::abs(v));
  }

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(lu_(i, k));
      if (v > best) {
        best = v;
        pivot = i;
      }
    }
    if (!(best > pivot_tol * row_scale[perm_[pivot]])) {
      failed_column_ = static_cast<long>(k);
      return;
    }
    if (pivot != k) {
      std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(pivot).begin());
      std::swap(perm_[k], perm_[pivot]);
    }

    const double inv = 1.0 / lu_(k, k);
    const auto pivot_row = lu_.row(k);
    for (std::size_t i = k + 1; i < n; ++i) {
      auto target = lu_.row(i);
      const double factor = target[k] * inv;
      target[k] = factor;
      if (factor == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) target[j] -= factor * pivot_row[j];
    }
  }
}

std::vector<double> LuFactorization::solve(std::span<const double> b) const {
  assert(ok());
  const std::size_t n = lu_.size();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = lu_.row(i);
    double s = b[perm_[i]];
    for (std::size_t j = 0; j < i; ++j) s -= r[j] * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    const auto r = lu_.row(i);
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= r[j] * x[j];
    x[i] = s / r[i];
  }
  return x;
}

}  // namespace rbffd

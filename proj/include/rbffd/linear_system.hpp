// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rbffd/geometry.hpp"
#include "rbffd/nodes.hpp"
#include "rbffd/stencil_weights.hpp"

namespace rbffd {

/// Compressed sparse rows, column indices sorted within each row.
struct CsrMatrix {
  std::size_t rows = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::size_t> col;
  std::vector<double> val;

  std::size_t nnz() const { return val.size(); }
  void multiply(std::span<const double> x, std::span<double> y) const;
  double diagonal(std::size_t i) const;
};

struct LinearSystem {
  CsrMatrix matrix;
  std::vector<double> rhs;

  std::size_t size() const { return matrix.rows; }
};

using ScalarField = std::function<double(Point2)>;

/// Interior row i: sum_j w_ij u_j = f(x_i). Boundary row j: u_j = g(x_j).
/// Throws MissingWeights when an interior node has no stencil.
LinearSystem assemble(const NodeSet& nodes, const StencilWeights& table, const ScalarField& f,
                      const ScalarField& g);

enum class SolverKind { Iterative, Dense };

const char* to_string(SolverKind kind) noexcept;
SolverKind solver_from_string(const std::string& name);

struct SolveReport {
  std::vector<double> solution;
  int iterations = 0;
  double relative_residual = 0.0;
  SolverKind method = SolverKind::Iterative;
};

constexpr double kDefaultTolerance = 1e-10;

/// ||b - A x||_2 / ||b||_2 (absolute norm if b = 0).
double relative_residual(const LinearSystem& system, std::span<const double> x);

/// Jacobi-preconditioned BiCGSTAB from a zero initial guess. `max_iter` <= 0
/// selects 10 * N. Throws NotConverged or Breakdown.
SolveReport solve_iterative(const LinearSystem& system, double tol = kDefaultTolerance,
                            int max_iter = 0);

constexpr std::size_t kMaxDenseSize = 3000;

/// Dense LU with partial pivoting. Throws TooLargeForDense above kMaxDenseSize
/// unknowns and SingularMatrix on a negligible pivot.
SolveReport solve_direct_dense(const LinearSystem& system);

SolveReport solve(const LinearSystem& system, SolverKind kind, double tol = kDefaultTolerance);

/// MatrixMarket coordinate dump of the matrix (1-based indices).
void write_matrix_market(std::ostream& out, const CsrMatrix& matrix);

}  // namespace rbffd

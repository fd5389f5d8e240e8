// SPDX-License-Identifier: Apache-2.0
#include "rbffd/linear_system.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <utility>

#include "rbffd/dense_lu.hpp"
#include "rbffd/error.hpp"

namespace rbffd {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * x[col[k]];
    y[i] = s;
  }
}

double CsrMatrix::diagonal(std::size_t i) const {
  const auto first = col.begin() + static_cast<long>(row_ptr[i]);
  const auto last = col.begin() + static_cast<long>(row_ptr[i + 1]);
  const auto it = std::lower_bound(first, last, i);
  return (it != last && *it == i) ? val[static_cast<std::size_t>(it - col.begin())] : 0.0;
}

LinearSystem assemble(const NodeSet& nodes, const StencilWeights& table, const ScalarField& f,
                      const ScalarField& g) {
  const std::size_t n = nodes.size();
  if (table.stencils.ids.size() != n || table.weights.w.size() != n) {
    throw Error(ErrorCode::MissingWeights, "weight table does not match node set size");
  }
  LinearSystem sys;
  sys.matrix.rows = n;
  sys.matrix.row_ptr.assign(1, 0);
  sys.rhs.resize(n);

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 p = nodes.points[i];
    if (nodes.boundary[i]) {
      sys.matrix.col.push_back(i);
      sys.matrix.val.push_back(1.0);
      sys.rhs[i] = g(p);
    } else {
      const auto& ids = table.stencils.ids[i];
      const auto& w = table.weights.w[i];
      if (ids.empty() || ids.size() != w.size()) {
        throw Error(ErrorCode::MissingWeights, "interior node " + std::to_string(i) + " has no weights");
      }
      order.resize(ids.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
      for (std::size_t k : order) {
        sys.matrix.col.push_back(ids[k]);
        sys.matrix.val.push_back(w[k]);
      }
      sys.rhs[i] = f(p);
    }
    sys.matrix.row_ptr.push_back(sys.matrix.col.size());
  }
  return sys;
}

const char* to_string(SolverKind kind) noexcept {
  return kind == SolverKind::Dense ? "dense" : "iterative";
}

SolverKind solver_from_string(const std::string& name) {
  if (name == "iterative") return SolverKind::Iterative;
  if (name == "dense") return SolverKind::Dense;
  throw Error(ErrorCode::InvalidArgument, "unknown solver '" + name + "'");
}

double relative_residual(const LinearSystem& system, std::span<const double> x) {
  std::vector<double> r(system.size());
  system.matrix.multiply(x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = system.rhs[i] - r[i];
  const double bnorm = norm2(system.rhs);
  return bnorm > 0.0 ? norm2(r) / bnorm : norm2(r);
}

SolveReport solve_iterative(const LinearSystem& system, double tol, int max_iter) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  const std::size_t n = system.size();
  if (max_iter <= 0) max_iter = static_cast<int>(std::min<std::size_t>(10 * n, 1u << 30));

  SolveReport report;
  report.method = SolverKind::Iterative;
  report.solution.assign(n, 0.0);
  if (n == 0) return report;

  std::vector<double> inv_diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = system.matrix.diagonal(i);
    inv_diag[i] = d != 0.0 ? 1.0 / d : 1.0;
  }

  const std::span<const double> b = system.rhs;
  const double bnorm = norm2(b);
  if (bnorm == 0.0) return report;
  const double target = tol * bnorm;

  std::vector<double>& x = report.solution;
  std::vector<double> r(b.begin(), b.end());
  std::vector<double> r_hat = r;
  std::vector<double> p(n, 0.0), v(n, 0.0), s(n), t(n), p_hat(n), s_hat(n), ax(n);
  double rho = 1.0, alpha = 1.0, omega = 1.0;

  auto true_residual = [&] {
    system.matrix.multiply(x, ax);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ax[i];
    return norm2(r);
  };

  int it = 0;
  while (it < max_iter) {
    ++it;
    const double rho_next = dot(r_hat, r);
    if (rho_next == 0.0 || !std::isfinite(rho_next)) {
      throw Error(ErrorCode::Breakdown, "BiCGSTAB breakdown: rho = 0 at iteration " + std::to_string(it));
    }
    const double beta = (rho_next / rho) * (alpha / omega);
    rho = rho_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    for (std::size_t i = 0; i < n; ++i) p_hat[i] = inv_diag[i] * p[i];
    system.matrix.multiply(p_hat, v);
    const double rv = dot(r_hat, v);
    if (rv == 0.0 || !std::isfinite(rv)) {
      throw Error(ErrorCode::Breakdown, "BiCGSTAB breakdown: (r_hat, v) = 0 at iteration " + std::to_string(it));
    }
    alpha = rho / rv;
    for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];

    if (norm2(s) <= target) {
      for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p_hat[i];
      if (true_residual() <= target) break;
      r_hat = r;  // recursive residual drifted; restart from the true one
      rho = alpha = omega = 1.0;
      std::fill(p.begin(), p.end(), 0.0);
      std::fill(v.begin(), v.end(), 0.0);
      continue;
    }

    for (std::size_t i = 0; i < n; ++i) s_hat[i] = inv_diag[i] * s[i];
    system.matrix.multiply(s_hat, t);
    const double tt = dot(t, t);
    if (tt == 0.0 || !std::isfinite(tt)) {
      throw Error(ErrorCode::Breakdown, "BiCGSTAB breakdown: t = 0 at iteration " + std::to_string(it));
    }
    omega = dot(t, s) / tt;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p_hat[i] + omega * s_hat[i];
      r[i] = s[i] - omega * t[i];
    }
    if (norm2(r) <= target) {
      if (true_residual() <= target) break;
      r_hat = r;
      rho = alpha = omega = 1.0;
      std::fill(p.begin(), p.end(), 0.0);
      std::fill(v.begin(), v.end(), 0.0);
      continue;
    }
    if (omega == 0.0) {
      throw Error(ErrorCode::Breakdown, "BiCGSTAB breakdown: omega = 0 at iteration " + std::to_string(it));
    }
  }

  report.iterations = it;
  report.relative_residual = relative_residual(system, x);
  if (!(report.relative_residual <= tol)) {
    char msg[128];
    std::snprintf(msg, sizeof msg, "BiCGSTAB did not converge: %d iterations, residual %.3e", it,
                  report.relative_residual);
    throw Error(ErrorCode::NotConverged, msg);
  }
  return report;
}

SolveReport solve_direct_dense(const LinearSystem& system) {
  const std::size_t n = system.size();
  if (n > kMaxDenseSize) {
    throw Error(ErrorCode::TooLargeForDense,
                std::to_string(n) + " unknowns exceed the dense limit of " + std::to_string(kMaxDenseSize));
  }
  DenseMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = system.matrix.row_ptr[i]; k < system.matrix.row_ptr[i + 1]; ++k) {
      a(i, system.matrix.col[k]) += system.matrix.val[k];
    }
  }
  const LuFactorization lu(std::move(a));
  if (!lu.ok()) {
    throw Error(ErrorCode::SingularMatrix, "matrix singular at column " + std::to_string(lu.failed_column()));
  }
  SolveReport report;
  report.method = SolverKind::Dense;
  report.solution = lu.solve(system.rhs);
  report.iterations = 1;
  report.relative_residual = relative_residual(system, report.solution);
  return report;
}

SolveReport solve(const LinearSystem& system, SolverKind kind, double tol) {
  return kind == SolverKind::Dense ? solve_direct_dense(system) : solve_iterative(system, tol);
}

void write_matrix_market(std::ostream& out, const CsrMatrix& matrix) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << matrix.rows << ' ' << matrix.rows << ' ' << matrix.nnz() << '\n';
  char line[96];
  for (std::size_t i = 0; i < matrix.rows; ++i) {
    for (std::size_t k = matrix.row_ptr[i]; k < matrix.row_ptr[i + 1]; ++k) {
      std::snprintf(line, sizeof line, "%zu %zu %.17g\n", i + 1, matrix.col[k] + 1, matrix.val[k]);
      out << line;
    }
  }
}

}  // namespace rbffd

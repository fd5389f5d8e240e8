// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "rbffd/error.hpp"
#include "rbffd/error_metrics.hpp"
#include "rbffd/linear_system.hpp"

using namespace rbffd;

namespace {

LinearSystem from_dense(const std::vector<std::vector<double>>& a, std::vector<double> b) {
  LinearSystem s;
  s.matrix.rows = a.size();
  for (const auto& row : a) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] != 0.0) {
        s.matrix.col.push_back(j);
        s.matrix.val.push_back(row[j]);
      }
    }
    s.matrix.row_ptr.push_back(s.matrix.col.size());
  }
  s.rhs = std::move(b);
  return s;
}

// Four boundary nodes around one interior node with the 5-point stencil.
struct Toy {
  NodeSet nodes;
  StencilWeights table;
};

Toy toy() {
  Toy t;
  t.nodes.points = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {0, 0}};
  t.nodes.boundary = {true, true, true, true, false};
  t.nodes.h = 1.0;
  t.table.stencils.ids.resize(5);
  t.table.weights.w.resize(5);
  t.table.stencils.ids[4] = {4, 2, 0, 3, 1};
  t.table.weights.w[4] = {-4, 1, 1, 1, 1};
  return t;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("assembly of the toy system") {
  const Toy t = toy();
  const auto g = [](Point2 p) { return p.x + 2.0 * p.y; };
  const auto f = [](Point2) { return 0.5; };
  const LinearSystem s = assemble(t.nodes, t.table, f, g);
  REQUIRE(s.size() == 5);
  CHECK(s.matrix.nnz() == 5 + 4);
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(s.matrix.row_ptr[j + 1] - s.matrix.row_ptr[j] == 1);
    CHECK(s.matrix.col[s.matrix.row_ptr[j]] == j);
    CHECK(s.matrix.val[s.matrix.row_ptr[j]] == 1.0);
    CHECK(s.rhs[j] == g(t.nodes.points[j]));
  }
  // Interior row with columns sorted.
  const std::size_t b = s.matrix.row_ptr[4];
  CHECK(std::vector<std::size_t>(s.matrix.col.begin() + b, s.matrix.col.end()) ==
        std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK(std::vector<double>(s.matrix.val.begin() + b, s.matrix.val.end()) ==
        std::vector<double>{1, 1, 1, 1, -4});
  CHECK(s.rhs[4] == 0.5);
  CHECK(s.matrix.diagonal(4) == -4.0);
}

TEST_CASE("missing weights are reported") {
  Toy t = toy();
  t.table.stencils.ids[4].clear();
  t.table.weights.w[4].clear();
  try {
    (void)assemble(t.nodes, t.table, exact_rhs, exact_solution);
    FAIL("expected MissingWeights");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingWeights);
  }
}

TEST_CASE("identity system") {
  const LinearSystem s = from_dense({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {3, -1, 2});
  const SolveReport r = solve_iterative(s, 1e-12);
  CHECK(r.iterations <= 1);
  CHECK(r.solution == std::vector<double>{3, -1, 2});
  CHECK(r.relative_residual == 0.0);
}

TEST_CASE("dense solve of a diagonal system") {
  const LinearSystem s = from_dense({{2, 0}, {0, 4}}, {2, 8});
  const SolveReport r = solve_direct_dense(s);
  CHECK(r.solution[0] == doctest::Approx(1.0));
  CHECK(r.solution[1] == doctest::Approx(2.0));
  CHECK(r.method == SolverKind::Dense);
}

TEST_CASE("dense solve of a random well-conditioned system") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::vector<double>> a(50, std::vector<double>(50));
  std::vector<double> b(50);
  for (std::size_t i = 0; i < 50; ++i) {
    for (double& v : a[i]) v = u(rng);
    a[i][i] += 10.0;
    b[i] = u(rng);
  }
  const LinearSystem s = from_dense(a, b);
  const SolveReport r = solve_direct_dense(s);
  CHECK(r.relative_residual <= 1e-12);

  Eigen::MatrixXd m(50, 50);
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) m(i, j) = a[i][j];
  const Eigen::VectorXd ref = m.partialPivLu().solve(Eigen::Map<const Eigen::VectorXd>(b.data(), 50));
  CHECK(max_diff(r.solution, std::vector<double>(ref.data(), ref.data() + 50)) <= 1e-12);

  const SolveReport it = solve_iterative(s, 1e-12);
  CHECK(max_diff(it.solution, r.solution) <= 1e-10);
}

TEST_CASE("dense error paths") {
  CHECK_THROWS_AS((void)solve_direct_dense(from_dense({{1, 2}, {2, 4}}, {1, 1})), Error);
  try {
    (void)solve_direct_dense(from_dense({{1, 2}, {2, 4}}, {1, 1}));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularMatrix);
  }

  LinearSystem big;
  big.matrix.rows = kMaxDenseSize + 1;
  for (std::size_t i = 0; i < big.matrix.rows; ++i) {
    big.matrix.col.push_back(i);
    big.matrix.val.push_back(1.0);
    big.matrix.row_ptr.push_back(i + 1);
  }
  big.rhs.assign(big.matrix.rows, 1.0);
  try {
    (void)solve_direct_dense(big);
    FAIL("expected TooLargeForDense");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooLargeForDense);
  }
}

TEST_CASE("a zero row is flagged by the iterative solver") {
  const LinearSystem s = from_dense({{2, 1, 0}, {0, 0, 0}, {0, 1, 3}}, {1, 1, 1});
  try {
    (void)solve_iterative(s, 1e-10, 200);
    FAIL("expected a solver failure");
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::Breakdown || e.code() == ErrorCode::NotConverged));
  }
}

TEST_CASE("iterative and dense solutions agree on the disc problem") {
  const DiscDomain disc;
  const NodeSet nodes = discretize_disc(disc, 0.05, 0);
  const NeighborIndex index(nodes.points);
  const auto table = build_weight_table(nodes, index, 28, MonomialBasis(3));
  const LinearSystem s = assemble(nodes, table, exact_rhs, exact_solution);

  std::size_t expected_nnz = nodes.boundary_count();
  for (std::size_t i = 0; i < nodes.size(); ++i) expected_nnz += table.stencils.size(i);
  CHECK(s.matrix.nnz() == expected_nnz);

  const SolveReport it = solve_iterative(s);
  const SolveReport dense = solve_direct_dense(s);
  CHECK(it.relative_residual <= kDefaultTolerance);
  CHECK(max_diff(it.solution, dense.solution) <= 1e-8);
  CHECK(std::abs(it.relative_residual - relative_residual(s, it.solution)) <= 1e-14);

  // Boundary rows hold the Dirichlet data.
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (nodes.boundary[j]) CHECK(std::abs(it.solution[j] - exact_solution(nodes.points[j])) <= 1e-8);
  }

  SUBCASE("constant data gives the all-ones solution") {
    const LinearSystem ones = assemble(nodes, table, [](Point2) { return 0.0; }, [](Point2) { return 1.0; });
    const SolveReport r = solve_direct_dense(ones);
    for (double v : r.solution) CHECK(std::abs(v - 1.0) <= 1e-9);
  }
}

TEST_CASE("matrix market dump") {
  const LinearSystem s = from_dense({{2, 0}, {1, 4}}, {0, 0});
  std::ostringstream out;
  write_matrix_market(out, s.matrix);
  CHECK(out.str() == "%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 2\n2 1 1\n2 2 4\n");
}

TEST_CASE("solver names") {
  CHECK(solver_from_string("dense") == SolverKind::Dense);
  CHECK(solver_from_string("iterative") == SolverKind::Iterative);
  CHECK_THROWS_AS((void)solver_from_string("lu"), Error);
}

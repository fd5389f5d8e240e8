// SPDX-License-Identifier: Apache-2.0
#include "rbffd/stencil_weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "rbffd/dense_lu.hpp"
#include "rbffd/error.hpp"

namespace rbffd {

namespace {

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

MonomialBasis::MonomialBasis(int degree) : degree_(degree) {
  if (degree < 0) throw Error(ErrorCode::InvalidArgument, "monomial degree must be >= 0");
  for (int total = 0; total <= degree; ++total) {
    for (int b = 0; b <= total; ++b) terms_.push_back({total - b, b});
  }
}

double monomial_value(Monomial m, Point2 p) { return ipow(p.x, m.a) * ipow(p.y, m.b); }

double monomial_laplacian(Monomial m, Point2 p) {
  double value = 0.0;
  if (m.a >= 2) value += m.a * (m.a - 1) * ipow(p.x, m.a - 2) * ipow(p.y, m.b);
  if (m.b >= 2) value += m.b * (m.b - 1) * ipow(p.x, m.a) * ipow(p.y, m.b - 2);
  return value;
}

std::vector<double> compute_laplacian_weights(std::span<const Point2> stencil, Point2 center,
                                              const MonomialBasis& basis) {
  const std::size_t n = stencil.size();
  const std::size_t q = basis.size();
  if (n < q) {
    throw Error(ErrorCode::InsufficientStencil, "stencil of " + std::to_string(n) +
                                                    " points cannot support " + std::to_string(q) +
                                                    " monomials");
  }

  double scale = 0.0;
  for (const Point2& p : stencil) scale = std::max(scale, distance(p, center));
  if (!(scale > 0.0)) throw Error(ErrorCode::SingularSystem, "stencil collapses onto its center");

  std::vector<Point2> local(n);
  for (std::size_t j = 0; j < n; ++j) local[j] = (1.0 / scale) * (stencil[j] - center);

  // [A P; P^T 0] [w; lambda] = [Lphi; Lp], center at the local origin.
  DenseMatrix system(n + q);
  std::vector<double> rhs(n + q, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      const double v = phs(distance(local[j], local[k]));
      system(j, k) = v;
      system(k, j) = v;
    }
    for (std::size_t l = 0; l < q; ++l) {
      const double v = monomial_value(basis.terms()[l], local[j]);
      system(j, n + l) = v;
      system(n + l, j) = v;
    }
    rhs[j] = phs_laplacian(std::hypot(local[j].x, local[j].y));
  }
  for (std::size_t l = 0; l < q; ++l) rhs[n + l] = monomial_laplacian(basis.terms()[l], {0.0, 0.0});

  const LuFactorization lu(std::move(system));
  if (!lu.ok()) {
    throw Error(ErrorCode::SingularSystem,
                "saddle-point system singular at column " + std::to_string(lu.failed_column()));
  }
  std::vector<double> solution = lu.solve(rhs);

  std::vector<double> weights(solution.begin(), solution.begin() + static_cast<long>(n));
  const double rescale = 1.0 / (scale * scale);
  for (double& w : weights) w *= rescale;
  return weights;
}

StencilWeights build_weight_table(const NodeSet& nodes, const NeighborIndex& index,
                                  std::span<const int> n_per_node, const MonomialBasis& basis) {
  if (n_per_node.size() != nodes.size()) {
    throw Error(ErrorCode::InvalidArgument, "stencil-size map must cover every node");
  }
  StencilWeights out;
  out.stencils.ids.resize(nodes.size());
  out.weights.w.resize(nodes.size());

  std::vector<Point2> points;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes.boundary[i]) continue;
    try {
      const int n = n_per_node[i];
      if (n < static_cast<int>(basis.size())) {
        throw Error(ErrorCode::InsufficientStencil,
                    "stencil size " + std::to_string(n) + " is below basis size " +
                        std::to_string(basis.size()));
      }
      auto ids = index.k_nearest(i, static_cast<std::size_t>(n));
      points.clear();
      for (std::size_t id : ids) points.push_back(nodes.points[id]);
      out.weights.w[i] = compute_laplacian_weights(points, nodes.points[i], basis);
      out.stencils.ids[i] = std::move(ids);
    } catch (const Error& e) {
      throw Error(e.code(), "node " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

StencilWeights build_weight_table(const NodeSet& nodes, const NeighborIndex& index, int n,
                                  const MonomialBasis& basis) {
  const std::vector<int> sizes(nodes.size(), n);
  return build_weight_table(nodes, index, sizes, basis);
}

void write_weights_csv(std::ostream& out, const StencilWeights& table) {
  out << "node_id,neighbor_rank,neighbor_id,weight\n";
  char line[96];
  for (std::size_t i = 0; i < table.stencils.ids.size(); ++i) {
    const auto& ids = table.stencils.ids[i];
    for (std::size_t r = 0; r < ids.size(); ++r) {
      std::snprintf(line, sizeof line, "%zu,%zu,%zu,%.17g\n", i, r, ids[r], table.weights.w[i][r]);
      out << line;
    }
  }
}

}  // namespace rbffd

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "rbffd/geometry.hpp"
#include "rbffd/nodes.hpp"
#include "rbffd/spatial_index.hpp"

namespace rbffd {

/// Exponent pair (a, b) of the monomial x^a y^b.
struct Monomial {
  int a = 0;
  int b = 0;

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// All 2-d monomials of total degree <= m in graded-lexicographic order:
/// (0,0),(1,0),(0,1),(2,0),(1,1),(0,2),(3,0),...
class MonomialBasis {
 public:
  explicit MonomialBasis(int degree = 3);

  int degree() const { return degree_; }
  std::size_t size() const { return terms_.size(); }
  const std::vector<Monomial>& terms() const { return terms_; }

 private:
  int degree_;
  std::vector<Monomial> terms_;
};

/// Cubic polyharmonic spline phi(r) = r^3.
inline double phs(double r) { return r * r * r; }

/// 2-d Laplacian of r^3, i.e. phi'' + phi'/r = 6r + 3r.
inline double phs_laplacian(double r) { return 9.0 * r; }

double monomial_value(Monomial m, Point2 p);

/// Laplacian of x^a y^b evaluated at p.
double monomial_laplacian(Monomial m, Point2 p);

/// RBF-FD Laplacian weights at `center` over `stencil` (any order; the
/// returned weights follow it). Solves the PHS + monomial saddle-point system
/// in local coordinates shifted by `center` and scaled by the stencil radius.
///
/// Throws InsufficientStencil when the stencil has fewer points than the
/// basis, SingularSystem when elimination hits a negligible pivot.
std::vector<double> compute_laplacian_weights(std::span<const Point2> stencil, Point2 center,
                                              const MonomialBasis& basis);

/// Per-node neighbour lists. Boundary nodes carry an empty list; for interior
/// nodes element 0 is the node itself.
struct StencilTable {
  std::vector<std::vector<std::size_t>> ids;

  std::size_t size(std::size_t node) const { return ids[node].size(); }
};

/// Per-node weights aligned with StencilTable::ids.
struct WeightTable {
  std::vector<std::vector<double>> w;
};

struct StencilWeights {
  StencilTable stencils;
  WeightTable weights;
};

/// Builds stencils and weights for all interior nodes; `n_per_node[i]` is the
/// stencil size of node i (entries of boundary nodes are ignored). Errors from
/// compute_laplacian_weights are rethrown with the node id prepended.
StencilWeights build_weight_table(const NodeSet& nodes, const NeighborIndex& index,
                                  std::span<const int> n_per_node, const MonomialBasis& basis);

/// Uniform stencil size for every interior node.
StencilWeights build_weight_table(const NodeSet& nodes, const NeighborIndex& index, int n,
                                  const MonomialBasis& basis);

/// `node_id,neighbor_rank,neighbor_id,weight` debug dump.
void write_weights_csv(std::ostream& out, const StencilWeights& table);

}  // namespace rbffd

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rbffd/geometry.hpp"

namespace rbffd {

/// Scattered discretisation of a disc. Boundary nodes come first, interior
/// nodes follow in the order the fill accepted them.
struct NodeSet {
  std::vector<Point2> points;
  std::vector<bool> boundary;
  double h = 0.0;
  std::uint64_t seed = 0;

  std::size_t size() const { return points.size(); }
  std::size_t interior_count() const;
  std::size_t boundary_count() const { return size() - interior_count(); }

  friend bool operator==(const NodeSet&, const NodeSet&) = default;
};

constexpr int kDefaultCandidates = 15;

/// Places round(2*pi*r/h) equally spaced nodes on the circle, starting at
/// angle 0. Throws BoundaryTooCoarse when fewer than three nodes result.
NodeSet discretize_boundary(const DiscDomain& domain, double h);

/// Advancing-front Poisson-disc fill of the disc interior. Every node in
/// `boundary` seeds the front; each processed node proposes `k_candidates`
/// points on the circle of radius h around itself and a proposal is kept when
/// it lies strictly inside the disc and no node is closer than h.
NodeSet fill_interior(const NodeSet& boundary, const DiscDomain& domain, double h,
                      std::uint64_t seed, int k_candidates = kDefaultCandidates);

/// discretize_boundary followed by fill_interior.
NodeSet discretize_disc(const DiscDomain& domain, double h, std::uint64_t seed,
                        int k_candidates = kDefaultCandidates);

enum class Region : std::uint8_t { Far = 0, NearBoundary = 1 };

/// NearBoundary iff |x - center| > r_split.
std::vector<Region> split_regions(const NodeSet& nodes, const DiscDomain& domain,
                                  double r_split);

const char* to_string(Region region) noexcept;

/// `x,y,boundary` CSV, one row per node in sequence order.
void write_nodes_csv(std::ostream& out, const NodeSet& nodes);

}  // namespace rbffd

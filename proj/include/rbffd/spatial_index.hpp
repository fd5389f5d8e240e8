// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rbffd/geometry.hpp"

namespace rbffd {

/// Immutable 2-d tree over a fixed point sequence. Queries are exact and
/// const, so concurrent queries need no locking.
class NeighborIndex {
 public:
  /// Throws EmptyNodeSet for an empty sequence. The points are copied.
  explicit NeighborIndex(std::span<const Point2> points);

  std::size_t size() const { return points_.size(); }
  const std::vector<Point2>& points() const { return points_; }

  /// The k nodes closest to node `query_id`, ascending by distance, exact
  /// ties broken by ascending id. The query node is element 0.
  std::vector<std::size_t> k_nearest(std::size_t query_id, std::size_t k) const;

  /// Same ordering contract for an arbitrary query location.
  std::vector<std::size_t> k_nearest(Point2 query, std::size_t k) const;

 private:
  struct Node {
    std::size_t begin;  // range into order_
    std::size_t end;
    int axis;           // -1 for leaves
    double split;
    std::size_t left;
    std::size_t right;
  };

  std::size_t build(std::size_t begin, std::size_t end);

  std::vector<Point2> points_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace rbffd

// SPDX-License-Identifier: Apache-2.0
#include "rbffd/spatial_index.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "rbffd/error.hpp"

namespace rbffd {

namespace {

constexpr std::size_t kLeafSize = 8;

struct Candidate {
  double dist2;
  std::size_t id;

  bool operator<(const Candidate& other) const {
    return dist2 < other.dist2 || (dist2 == other.dist2 && id < other.id);
  }
};

double coordinate(Point2 p, int axis) { return axis == 0 ? p.x : p.y; }

}  // namespace

NeighborIndex::NeighborIndex(std::span<const Point2> points)
    : points_(points.begin(), points.end()) {
  if (points_.empty()) throw Error(ErrorCode::EmptyNodeSet, "cannot index an empty node set");
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  nodes_.reserve(2 * points_.size() / kLeafSize + 2);
  build(0, points_.size());
}

std::size_t NeighborIndex::build(std::size_t begin, std::size_t end) {
  const std::size_t self = nodes_.size();
  nodes_.push_back({begin, end, -1, 0.0, 0, 0});
  if (end - begin <= kLeafSize) return self;

  double lo[2] = {points_[order_[begin]].x, points_[order_[begin]].y};
  double hi[2] = {lo[0], lo[1]};
  for (std::size_t i = begin; i < end; ++i) {
    const Point2 p = points_[order_[i]];
    lo[0] = std::min(lo[0], p.x);
    hi[0] = std::max(hi[0], p.x);
    lo[1] = std::min(lo[1], p.y);
    hi[1] = std::max(hi[1], p.y);
  }
  const int axis = (hi[0] - lo[0] >= hi[1] - lo[1]) ? 0 : 1;
  if (hi[axis] == lo[axis]) return self;  // all points coincide along both axes

  const std::size_t mid = begin + (end - begin) / 2;
  // Ties ordered by id so the tree shape depends only on the point sequence.
  std::nth_element(order_.begin() + static_cast<long>(begin), order_.begin() + static_cast<long>(mid),
                   order_.begin() + static_cast<long>(end), [&](std::size_t a, std::size_t b) {
                     const double ca = coordinate(points_[a], axis);
                     const double cb = coordinate(points_[b], axis);
                     return ca < cb || (ca == cb && a < b);
                   });
  const double split = coordinate(points_[order_[mid]], axis);
  const std::size_t left = build(begin, mid);
  const std::size_t right = build(mid, end);
  nodes_[self].axis = axis;
  nodes_[self].split = split;
  nodes_[self].left = left;
  nodes_[self].right = right;
  return self;
}

std::vector<std::size_t> NeighborIndex::k_nearest(std::size_t query_id, std::size_t k) const {
  if (query_id >= points_.size()) {
    throw Error(ErrorCode::InvalidArgument, "query id " + std::to_string(query_id) + " out of range");
  }
  return k_nearest(points_[query_id], k);
}

std::vector<std::size_t> NeighborIndex::k_nearest(Point2 query, std::size_t k) const {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  if (k > points_.size()) {
    throw Error(ErrorCode::KTooLarge, "k=" + std::to_string(k) + " exceeds node count " +
                                          std::to_string(points_.size()));
  }

  // Max-heap of the best k so far, ordered by (dist2, id).
  std::vector<Candidate> best;
  best.reserve(k + 1);

  auto consider = [&](std::size_t id) {
    const Candidate c{squared_distance(points_[id], query), id};
    if (best.size() < k) {
      best.push_back(c);
      std::push_heap(best.begin(), best.end());
    } else if (c < best.front()) {
      std::pop_heap(best.begin(), best.end());
      best.back() = c;
      std::push_heap(best.begin(), best.end());
    }
  };

  // Iterative descent; a far subtree is skipped only if its slab is strictly
  // farther than the current k-th distance, so equal-distance ties are seen.
  struct Pending {
    std::size_t node;
    double slab_dist2;
  };
  std::vector<Pending> stack;
  stack.push_back({0, 0.0});
  while (!stack.empty()) {
    const Pending top = stack.back();
    stack.pop_back();
    if (best.size() == k && top.slab_dist2 > best.front().dist2) continue;
    const Node& node = nodes_[top.node];
    if (node.axis < 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) consider(order_[i]);
      continue;
    }
    const double diff = coordinate(query, node.axis) - node.split;
    const std::size_t near = diff < 0.0 ? node.left : node.right;
    const std::size_t far = diff < 0.0 ? node.right : node.left;
    stack.push_back({far, std::max(top.slab_dist2, diff * diff)});
    stack.push_back({near, top.slab_dist2});
  }

  std::sort_heap(best.begin(), best.end());
  std::vector<std::size_t> ids;
  ids.reserve(k);
  for (const Candidate& c : best) ids.push_back(c.id);
  return ids;
}

}  // namespace rbffd

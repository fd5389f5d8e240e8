// SPDX-License-Identifier: Apache-2.0
#include "rbffd/nodes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include "rbffd/error.hpp"

namespace rbffd {

namespace {

// Accepting at exactly h would reject a candidate against its own parent
// because of rounding in cos/sin.
constexpr double kProximityFactor = 1.0 - 1e-10;

// Portable uniform in [0, 1): std::uniform_real_distribution is not
// bit-reproducible across standard libraries.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform background grid with cell size h; any node closer than h to a query
// lies in the 3x3 block of cells around it.
class ProximityGrid {
 public:
  ProximityGrid(const DiscDomain& domain, double h) : h_(h) {
    origin_ = {domain.center.x - domain.radius - h, domain.center.y - domain.radius - h};
    const double extent = 2.0 * (domain.radius + h);
    cells_per_side_ = static_cast<long>(std::ceil(extent / h)) + 1;
    cells_.resize(static_cast<std::size_t>(cells_per_side_ * cells_per_side_));
  }

  void insert(std::size_t id, Point2 p) { cells_[cell_of(p)].push_back(id); }

  bool has_node_within(Point2 p, double min_dist, const std::vector<Point2>& points) const {
    const long cx = coord(p.x - origin_.x);
    const long cy = coord(p.y - origin_.y);
    const double min_sq = min_dist * min_dist;
    for (long j = std::max(0L, cy - 1); j <= std::min(cells_per_side_ - 1, cy + 1); ++j) {
      for (long i = std::max(0L, cx - 1); i <= std::min(cells_per_side_ - 1, cx + 1); ++i) {
        for (std::size_t id : cells_[static_cast<std::size_t>(j * cells_per_side_ + i)]) {
          if (squared_distance(points[id], p) < min_sq) return true;
        }
      }
    }
    return false;
  }

 private:
  long coord(double offset) const {
    const long c = static_cast<long>(std::floor(offset / h_));
    return std::clamp(c, 0L, cells_per_side_ - 1);
  }

  std::size_t cell_of(Point2 p) const {
    return static_cast<std::size_t>(coord(p.y - origin_.y) * cells_per_side_ +
                                    coord(p.x - origin_.x));
  }

  double h_;
  Point2 origin_;
  long cells_per_side_ = 0;
  std::vector<std::vector<std::size_t>> cells_;
};

}  // namespace

std::size_t NodeSet::interior_count() const {
  return static_cast<std::size_t>(std::count(boundary.begin(), boundary.end(), false));
}

NodeSet discretize_boundary(const DiscDomain& domain, double h) {
  if (!(h > 0.0) || !(domain.radius > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "spacing and radius must be positive");
  }
  const double count_real = std::round(2.0 * std::numbers::pi * domain.radius / h);
  if (count_real < 3.0) {
    throw Error(ErrorCode::BoundaryTooCoarse,
                "boundary would have " + std::to_string(static_cast<long>(count_real)) +
                    " nodes, need at least 3");
  }
  const auto count = static_cast<std::size_t>(count_real);

  NodeSet out;
  out.h = h;
  out.points.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / count_real;
    out.points.push_back({domain.center.x + domain.radius * std::cos(angle),
                          domain.center.y + domain.radius * std::sin(angle)});
  }
  out.boundary.assign(count, true);
  return out;
}

NodeSet fill_interior(const NodeSet& boundary, const DiscDomain& domain, double h,
                      std::uint64_t seed, int k_candidates) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "spacing must be positive");
  if (k_candidates < 1) throw Error(ErrorCode::InvalidArgument, "k_candidates must be >= 1");

  NodeSet out = boundary;
  out.h = h;
  out.seed = seed;

  ProximityGrid grid(domain, h);
  for (std::size_t i = 0; i < out.points.size(); ++i) grid.insert(i, out.points[i]);

  std::mt19937_64 rng(seed);
  const double min_dist = kProximityFactor * h;

  // The front is the tail of `out.points` starting at `next`; accepted nodes
  // are appended and processed later in FIFO order.
  for (std::size_t next = 0; next < out.points.size(); ++next) {
    const Point2 parent = out.points[next];
    for (int c = 0; c < k_candidates; ++c) {
      const double angle = 2.0 * std::numbers::pi * uniform01(rng);
      const Point2 candidate{parent.x + h * std::cos(angle), parent.y + h * std::sin(angle)};
      if (!domain.strictly_contains(candidate)) continue;
      if (grid.has_node_within(candidate, min_dist, out.points)) continue;
      grid.insert(out.points.size(), candidate);
      out.points.push_back(candidate);
      out.boundary.push_back(false);
    }
  }
  return out;
}

NodeSet discretize_disc(const DiscDomain& domain, double h, std::uint64_t seed,
                        int k_candidates) {
  return fill_interior(discretize_boundary(domain, h), domain, h, seed, k_candidates);
}

std::vector<Region> split_regions(const NodeSet& nodes, const DiscDomain& domain,
                                  double r_split) {
  if (!(r_split > 0.0) || !(r_split < domain.radius)) {
    throw Error(ErrorCode::InvalidArgument, "r_split must lie in (0, radius)");
  }
  std::vector<Region> labels;
  labels.reserve(nodes.size());
  for (const Point2& p : nodes.points) {
    labels.push_back(distance(p, domain.center) > r_split ? Region::NearBoundary : Region::Far);
  }
  return labels;
}

const char* to_string(Region region) noexcept {
  return region == Region::NearBoundary ? "near" : "far";
}

void write_nodes_csv(std::ostream& out, const NodeSet& nodes) {
  out << "x,y,boundary\n";
  char line[96];
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%d\n", nodes.points[i].x, nodes.points[i].y,
                  nodes.boundary[i] ? 1 : 0);
    out << line;
  }
}

}  // namespace rbffd

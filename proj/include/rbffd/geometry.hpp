// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

namespace rbffd {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

inline double squared_distance(Point2 a, Point2 b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double distance(Point2 a, Point2 b) { return std::sqrt(squared_distance(a, b)); }

/// Closed disc {x : |x - center| <= radius}.
struct DiscDomain {
  Point2 center{0.5, 0.5};
  double radius = 0.5;

  bool strictly_contains(Point2 p) const {
    return squared_distance(p, center) < radius * radius;
  }
};

}  // namespace rbffd

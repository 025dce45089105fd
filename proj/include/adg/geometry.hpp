#pragma once

#include <cmath>

namespace adg {

/// Plain 2D point / vector.
struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2 a) { return std::sqrt(dot(a, a)); }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline Point2 midpoint(Point2 a, Point2 b) {
  return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
}

/// Signed area of triangle (a,b,c); positive for counterclockwise order.
inline double signed_area(Point2 a, Point2 b, Point2 c) {
  return 0.5 * cross(b - a, c - a);
}

}  // namespace adg

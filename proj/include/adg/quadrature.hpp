#pragma once

#include <vector>

#include "adg/geometry.hpp"

namespace adg {

/// Quadrature node in barycentric coordinates. Weights are normalized to
/// sum to 1, so an integral over a triangle T is |T| * sum_q w_q f(x_q).
struct TriQuadPoint {
  double l0, l1, l2, w;
};

struct TriQuadRule {
  int degree;
  std::vector<TriQuadPoint> points;
};

/// Six-point symmetric rule, exact for polynomials of total degree <= 4.
/// Used for all load vectors and for the volume terms h_T^2 ||f||_T^2.
const TriQuadRule& tri_quad_degree4();

/// Twelve-point symmetric rule, exact for degree <= 6. Used for energy errors.
const TriQuadRule& tri_quad_degree6();

/// 25-point collapsed-coordinate (Duffy) rule built from 5-point
/// Gauss-Legendre, exact for degree <= 8. Only used for quadrature
/// self-consistency checks.
const TriQuadRule& tri_quad_degree8();

inline Point2 bary_to_point(const TriQuadPoint& q, Point2 a, Point2 b, Point2 c) {
  return {q.l0 * a.x + q.l1 * b.x + q.l2 * c.x,
          q.l0 * a.y + q.l1 * b.y + q.l2 * c.y};
}

}  // namespace adg

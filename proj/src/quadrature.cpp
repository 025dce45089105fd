#include "adg/quadrature.hpp"

#include <array>

namespace adg {

namespace {

void push_orbit3(std::vector<TriQuadPoint>& pts, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  pts.push_back({b, a, a, w});
  pts.push_back({a, b, a, w});
  pts.push_back({a, a, b, w});
}

void push_orbit6(std::vector<TriQuadPoint>& pts, double a, double b, double w) {
  const double c = 1.0 - a - b;
  pts.push_back({a, b, c, w});
  pts.push_back({a, c, b, w});
  pts.push_back({b, a, c, w});
  pts.push_back({b, c, a, w});
  pts.push_back({c, a, b, w});
  pts.push_back({c, b, a, w});
}

TriQuadRule make_degree4() {
  // Dunavant's 6-point rule.
  TriQuadRule rule;
  rule.degree = 4;
  push_orbit3(rule.points, 0.445948490915965, 0.223381589678011);
  push_orbit3(rule.points, 0.091576213509771, 0.109951743655322);
  return rule;
}

TriQuadRule make_degree6() {
  // Dunavant's 12-point rule.
  TriQuadRule rule;
  rule.degree = 6;
  push_orbit3(rule.points, 0.249286745170910, 0.116786275726379);
  push_orbit3(rule.points, 0.063089014491502, 0.050844906370207);
  push_orbit6(rule.points, 0.310352451033785, 0.636502499121399, 0.082851075618374);
  return rule;
}

TriQuadRule make_degree8() {
  // 5-node Gauss-Legendre on [0,1], collapsed onto the triangle via
  // (x, y) = (s, t (1 - s)) with Jacobian (1 - s). The s-degree of a total
  // degree-8 integrand is at most 9, exact for 5 nodes.
  static constexpr std::array<double, 5> node = {
      0.5 - 0.45308992296933193 /* 0.9061798459386640 / 2 */,
      0.5 - 0.26923465505284155 /* 0.5384693101056831 / 2 */,
      0.5,
      0.5 + 0.26923465505284155,
      0.5 + 0.45308992296933193};
  static constexpr std::array<double, 5> weight = {
      0.5 * 0.23692688505618909, 0.5 * 0.47862867049936647,
      0.5 * 0.56888888888888889, 0.5 * 0.47862867049936647,
      0.5 * 0.23692688505618909};

  TriQuadRule rule;
  rule.degree = 8;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double s = node[i];
      const double t = node[j] * (1.0 - s);
      // Normalize so weights sum to 1 (reference-triangle area is 1/2).
      const double w = 2.0 * weight[i] * weight[j] * (1.0 - s);
      rule.points.push_back({1.0 - s - t, s, t, w});
    }
  }
  return rule;
}

}  // namespace

const TriQuadRule& tri_quad_degree4() {
  static const TriQuadRule rule = make_degree4();
  return rule;
}

const TriQuadRule& tri_quad_degree6() {
  static const TriQuadRule rule = make_degree6();
  return rule;
}

const TriQuadRule& tri_quad_degree8() {
  static const TriQuadRule rule = make_degree8();
  return rule;
}

}  // namespace adg

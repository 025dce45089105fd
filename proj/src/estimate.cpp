#include "adg/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "adg/quadrature.hpp"

namespace adg {

EstimatorBreakdown estimate(const CrFunction& u_h_star, const ScalarField& f,
                            const Mesh& mesh) {
  EstimatorBreakdown est;
  est.per_edge_jump.assign(static_cast<size_t>(mesh.n_edges()), 0.0);
  est.per_element_volume.assign(static_cast<size_t>(mesh.n_triangles()), 0.0);

  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Edge& edge = mesh.edges[static_cast<size_t>(e)];
    if (edge.is_boundary()) continue;
    // The tangential derivative of a P1 function is constant along the edge,
    // so integral_e h_e [[du*/ds]]^2 ds = h_e^2 (slope jump)^2.
    const Point2 pa = mesh.vertices[static_cast<size_t>(edge.v[0])];
    const Point2 pb = mesh.vertices[static_cast<size_t>(edge.v[1])];
    const Point2 tangent = (1.0 / edge.length) * (pb - pa);
    const double slope_minus = dot(cr_gradient(u_h_star, mesh, edge.t_minus), tangent);
    const double slope_plus = dot(cr_gradient(u_h_star, mesh, *edge.t_plus), tangent);
    const double jump = slope_minus - slope_plus;
    est.per_edge_jump[static_cast<size_t>(e)] = edge.length * edge.length * jump * jump;
  }

  const TriQuadRule& rule = tri_quad_degree4();
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const Point2 p0 = mesh.vertex_of(t, 0);
    const Point2 p1 = mesh.vertex_of(t, 1);
    const Point2 p2 = mesh.vertex_of(t, 2);
    double f_sq = 0.0;
    for (const TriQuadPoint& q : rule.points) {
      const double fx = f(bary_to_point(q, p0, p1, p2));
      f_sq += q.w * fx * fx;
    }
    const double ht = mesh.h[static_cast<size_t>(t)];
    est.per_element_volume[static_cast<size_t>(t)] =
        ht * ht * mesh.area[static_cast<size_t>(t)] * f_sq;
  }

  est.jump_total = std::accumulate(est.per_edge_jump.begin(), est.per_edge_jump.end(), 0.0);
  est.volume_total =
      std::accumulate(est.per_element_volume.begin(), est.per_element_volume.end(), 0.0);
  est.eta_sq_total = est.jump_total + est.volume_total;
  return est;
}

void write_estimator_csv(const EstimatorBreakdown& est, std::ostream& out) {
  out << "kind,id,indicator\n";
  char buf[64];
  for (size_t e = 0; e < est.per_edge_jump.size(); ++e) {
    std::snprintf(buf, sizeof buf, "edge,%zu,%.17g\n", e, est.per_edge_jump[e]);
    out << buf;
  }
  for (size_t t = 0; t < est.per_element_volume.size(); ++t) {
    std::snprintf(buf, sizeof buf, "element,%zu,%.17g\n", t, est.per_element_volume[t]);
    out << buf;
  }
}

std::vector<int> dorfler_select(std::span<const double> indicators, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw std::invalid_argument("dorfler_select: fraction must be in (0,1]");
  double total = 0.0;
  for (double v : indicators) {
    if (v < 0.0) throw std::invalid_argument("dorfler_select: negative indicator");
    total += v;
  }
  if (total == 0.0) return {};  // nothing to select; caller treats as done

  std::vector<int> order(indicators.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double va = indicators[static_cast<size_t>(a)];
    const double vb = indicators[static_cast<size_t>(b)];
    return va != vb ? va > vb : a < b;
  });

  const double threshold = fraction * total;
  std::vector<int> selected;
  double sum = 0.0;
  for (int idx : order) {
    if (sum >= threshold) break;
    if (indicators[static_cast<size_t>(idx)] == 0.0) break;
    selected.push_back(idx);
    sum += indicators[static_cast<size_t>(idx)];
  }
  std::sort(selected.begin(), selected.end());
  return selected;
}

MarkResult mark_ch(const EstimatorBreakdown& est, const MarkingConfig& cfg) {
  MarkResult r;
  if (est.jump_total > 0.0) r.marked_edges = dorfler_select(est.per_edge_jump, cfg.theta_ch);
  // Supplementary volume marking drives the oscillation reduction
  // ||hf||^2 <= rho2 ||Hf||^2 that the contraction argument needs.
  if (est.volume_total > 0.0)
    r.marked_triangles = dorfler_select(est.per_element_volume, cfg.sigma_osc);
  return r;
}

MarkResult mark_bms(const EstimatorBreakdown& est, const MarkingConfig& cfg) {
  MarkResult r;
  if (est.volume_total <= cfg.gamma_switch * est.jump_total) {
    r.branch = MarkBranch::Jump;
    if (est.jump_total > 0.0) r.marked_edges = dorfler_select(est.per_edge_jump, cfg.theta_bms);
  } else {
    r.branch = MarkBranch::Volume;
    r.marked_triangles = dorfler_select(est.per_element_volume, cfg.sigma);
  }
  return r;
}

MarkResult mark(const EstimatorBreakdown& est, const MarkingConfig& cfg) {
  return cfg.strategy == MarkingStrategy::CarstensenHoppe ? mark_ch(est, cfg)
                                                          : mark_bms(est, cfg);
}

}  // namespace adg

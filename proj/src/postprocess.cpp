#include "adg/postprocess.hpp"

#include <cmath>

#include "adg/quadrature.hpp"

namespace adg {

CrFunction average_to_cr(const DgFunction& u_h, const Mesh& mesh) {
  CrFunction out = CrFunction::zeros(mesh);
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Edge& edge = mesh.edges[static_cast<size_t>(e)];
    if (edge.is_boundary()) continue;  // boundary midpoints stay 0
    out.midpoint_values[static_cast<size_t>(e)] =
        0.5 * (dg_midpoint_trace(u_h, mesh, edge.t_minus, e) +
               dg_midpoint_trace(u_h, mesh, *edge.t_plus, e));
  }
  return out;
}

double integral_relation_residual(const DgFunction& u_h, const DgFunction& v_h,
                                  const Mesh& mesh) {
  const CrFunction u_star = average_to_cr(u_h, mesh);
  double volume = 0.0, edge_term = 0.0, star = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const Point2 gu = dg_gradient(u_h, mesh, t);
    const Point2 gv = dg_gradient(v_h, mesh, t);
    const double a = mesh.area[static_cast<size_t>(t)];
    volume += a * dot(gu, gv);
    star += a * dot(cr_gradient(u_star, mesh, t), gv);
  }
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Edge& edge = mesh.edges[static_cast<size_t>(e)];
    // integral_e {grad v}.[[u]] = h_e ({grad v}.n_e) (midpoint jump of u).
    Point2 mean_grad = dg_gradient(v_h, mesh, edge.t_minus);
    if (!edge.is_boundary())
      mean_grad = 0.5 * (mean_grad + dg_gradient(v_h, mesh, *edge.t_plus));
    edge_term += edge.length * dot(mean_grad, edge.normal) * dg_midpoint_jump(u_h, mesh, e);
  }
  return std::abs(volume - edge_term - star);
}

double energy_identity_residual(const DgFunction& u_h, const ScalarField& f,
                                const Mesh& mesh, MethodKind method, double alpha) {
  const SparseSymMatrix A = assemble_system(mesh, method, alpha);
  const std::vector<double> b = assemble_rhs(mesh, f);
  const DgFunction d = u_h - embed(average_to_cr(u_h, mesh), mesh);
  double fd = 0.0;
  for (size_t i = 0; i < b.size(); ++i) fd += b[i] * d.coeffs[i];
  return std::abs(A.quadratic_form(d.coeffs) - fd);
}

double hf_norm_sq(const Mesh& mesh, const ScalarField& f) {
  const TriQuadRule& rule = tri_quad_degree4();
  double sum = 0.0;
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
    sum += ht * ht * mesh.area[static_cast<size_t>(t)] * f_sq;
  }
  return sum;
}

std::optional<double> volume_bound_constant(const DgFunction& u_h,
                                            const CrFunction& u_h_star,
                                            const ScalarField& f, const Mesh& mesh) {
  const double denom = hf_norm_sq(mesh, f);
  if (denom == 0.0) return std::nullopt;
  const double diff = norm_1h(u_h - embed(u_h_star, mesh), mesh);
  return diff * diff / denom;
}

double jump_control_lhs(const DgFunction& u_h, const CrFunction& u_h_star,
                        const Mesh& mesh) {
  const DgFunction d = u_h - embed(u_h_star, mesh);
  double sum = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const double a = mesh.area[static_cast<size_t>(t)];
    const double c0 = d.coeffs[static_cast<size_t>(3 * t + 0)];
    const double c1 = d.coeffs[static_cast<size_t>(3 * t + 1)];
    const double c2 = d.coeffs[static_cast<size_t>(3 * t + 2)];
    // Exact P1 mass: integral_T v^2 = |T|/6 (c0^2+c1^2+c2^2 + c0c1+c1c2+c0c2).
    const double l2_sq =
        a / 6.0 * (c0 * c0 + c1 * c1 + c2 * c2 + c0 * c1 + c1 * c2 + c0 * c2);
    const Point2 g = dg_gradient(d, mesh, t);
    const double ht = mesh.h[static_cast<size_t>(t)];
    sum += l2_sq / (ht * ht) + a * dot(g, g);
  }
  return sum;
}

}  // namespace adg

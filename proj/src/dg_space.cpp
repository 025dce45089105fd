#include "adg/dg_space.hpp"

#include <cmath>

namespace adg {

Point2 dg_gradient(const DgFunction& v, const Mesh& mesh, int t) {
  const auto& g = mesh.grad_lambda[static_cast<size_t>(t)];
  Point2 grad{0.0, 0.0};
  for (int k = 0; k < 3; ++k)
    grad = grad + v.coeffs[static_cast<size_t>(3 * t + k)] * g[static_cast<size_t>(k)];
  return grad;
}

double dg_midpoint_trace(const DgFunction& v, const Mesh& mesh, int t, int e) {
  const Edge& edge = mesh.edges[static_cast<size_t>(e)];
  const int la = mesh.local_vertex_index(t, edge.v[0]);
  const int lb = mesh.local_vertex_index(t, edge.v[1]);
  return 0.5 * (v.coeffs[static_cast<size_t>(3 * t + la)] +
                v.coeffs[static_cast<size_t>(3 * t + lb)]);
}

double dg_midpoint_jump(const DgFunction& v, const Mesh& mesh, int e) {
  const Edge& edge = mesh.edges[static_cast<size_t>(e)];
  double jump = dg_midpoint_trace(v, mesh, edge.t_minus, e);
  if (!edge.is_boundary()) jump -= dg_midpoint_trace(v, mesh, *edge.t_plus, e);
  return jump;
}

EdgeConstVec jump_mean_projection(const DgFunction& v, const Mesh& mesh) {
  EdgeConstVec out = EdgeConstVec::zeros(mesh);
  for (int e = 0; e < mesh.n_edges(); ++e)
    out.values[static_cast<size_t>(e)] =
        dg_midpoint_jump(v, mesh, e) * mesh.edges[static_cast<size_t>(e)].normal;
  return out;
}

PwConstVec lift_local(int e, Point2 w, const Mesh& mesh) {
  PwConstVec out = PwConstVec::zeros(mesh);
  const Edge& edge = mesh.edges[static_cast<size_t>(e)];
  if (edge.is_boundary()) {
    out.values[static_cast<size_t>(edge.t_minus)] =
        (-edge.length / mesh.area[static_cast<size_t>(edge.t_minus)]) * w;
  } else {
    out.values[static_cast<size_t>(edge.t_minus)] =
        (-edge.length / (2.0 * mesh.area[static_cast<size_t>(edge.t_minus)])) * w;
    out.values[static_cast<size_t>(*edge.t_plus)] =
        (-edge.length / (2.0 * mesh.area[static_cast<size_t>(*edge.t_plus)])) * w;
  }
  return out;
}

PwConstVec lift_global(const EdgeConstVec& w, const Mesh& mesh) {
  PwConstVec out = PwConstVec::zeros(mesh);
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Edge& edge = mesh.edges[static_cast<size_t>(e)];
    const Point2 we = w.values[static_cast<size_t>(e)];
    const double scale_minus = edge.is_boundary() ? 1.0 : 0.5;
    out.values[static_cast<size_t>(edge.t_minus)] =
        out.values[static_cast<size_t>(edge.t_minus)] +
        (-scale_minus * edge.length / mesh.area[static_cast<size_t>(edge.t_minus)]) * we;
    if (!edge.is_boundary())
      out.values[static_cast<size_t>(*edge.t_plus)] =
          out.values[static_cast<size_t>(*edge.t_plus)] +
          (-0.5 * edge.length / mesh.area[static_cast<size_t>(*edge.t_plus)]) * we;
  }
  return out;
}

double norm_1h(const DgFunction& v, const Mesh& mesh) {
  double sum = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const Point2 g = dg_gradient(v, mesh, t);
    sum += mesh.area[static_cast<size_t>(t)] * dot(g, g);
  }
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const double j = dg_midpoint_jump(v, mesh, e);
    sum += j * j;  // |Pi_e([[v]])|^2, the normal is unit
  }
  return std::sqrt(sum);
}

double broken_h1(const DgFunction& v, const Mesh& mesh) {
  double sum = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const Point2 g = dg_gradient(v, mesh, t);
    sum += mesh.area[static_cast<size_t>(t)] * dot(g, g);
  }
  return std::sqrt(sum);
}

Point2 cr_gradient(const CrFunction& v, const Mesh& mesh, int t) {
  // v|_T = sum_k m_k (1 - 2 lambda_k) with m_k the midpoint value on the
  // edge opposite vertex k.
  Point2 grad{0.0, 0.0};
  for (int k = 0; k < 3; ++k) {
    const int e = mesh.edge_of_triangle[static_cast<size_t>(t)][static_cast<size_t>(k)];
    grad = grad + (-2.0 * v.midpoint_values[static_cast<size_t>(e)]) *
                      mesh.grad_lambda[static_cast<size_t>(t)][static_cast<size_t>(k)];
  }
  return grad;
}

double broken_h1(const CrFunction& v, const Mesh& mesh) {
  double sum = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const Point2 g = cr_gradient(v, mesh, t);
    sum += mesh.area[static_cast<size_t>(t)] * dot(g, g);
  }
  return std::sqrt(sum);
}

DgFunction embed(const CrFunction& v, const Mesh& mesh) {
  DgFunction out = DgFunction::zeros(mesh);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& eot = mesh.edge_of_triangle[static_cast<size_t>(t)];
    const double m0 = v.midpoint_values[static_cast<size_t>(eot[0])];
    const double m1 = v.midpoint_values[static_cast<size_t>(eot[1])];
    const double m2 = v.midpoint_values[static_cast<size_t>(eot[2])];
    // Vertex value of a P1 function from its three edge-midpoint values.
    out.coeffs[static_cast<size_t>(3 * t + 0)] = m1 + m2 - m0;
    out.coeffs[static_cast<size_t>(3 * t + 1)] = m2 + m0 - m1;
    out.coeffs[static_cast<size_t>(3 * t + 2)] = m0 + m1 - m2;
  }
  return out;
}

}  // namespace adg

#pragma once

#include <vector>

#include "adg/mesh.hpp"

namespace adg {

/// Element of V_h: piecewise linear, fully discontinuous. Coefficient
/// 3*t + k is the value of the restriction to triangle t at its vertex k.
struct DgFunction {
  std::vector<double> coeffs;

  static DgFunction zeros(const Mesh& mesh) {
    return {std::vector<double>(static_cast<size_t>(3 * mesh.n_triangles()), 0.0)};
  }
};

/// Element of V_CR: one value per edge midpoint, zero on boundary midpoints.
struct CrFunction {
  std::vector<double> midpoint_values;  ///< one per edge; boundary entries 0

  static CrFunction zeros(const Mesh& mesh) {
    return {std::vector<double>(static_cast<size_t>(mesh.n_edges()), 0.0)};
  }
};

/// Element of W_h: one constant 2-vector per triangle.
struct PwConstVec {
  std::vector<Point2> values;

  static PwConstVec zeros(const Mesh& mesh) {
    return {std::vector<Point2>(static_cast<size_t>(mesh.n_triangles()))};
  }
};

/// Per-edge constant 2-vector; houses the projected jumps Pi_e([[v]]),
/// which are (scalar midpoint jump) * edge normal.
struct EdgeConstVec {
  std::vector<Point2> values;

  static EdgeConstVec zeros(const Mesh& mesh) {
    return {std::vector<Point2>(static_cast<size_t>(mesh.n_edges()))};
  }
};

/// Elementwise gradient of v restricted to triangle t (constant for P1).
Point2 dg_gradient(const DgFunction& v, const Mesh& mesh, int t);

/// Trace of v|_t at the midpoint of edge e (which must belong to t).
/// For P1 traces this equals the edge mean (midpoint-rule equivalence).
double dg_midpoint_trace(const DgFunction& v, const Mesh& mesh, int t, int e);

/// Scalar midpoint jump across edge e: trace from t_minus minus trace from
/// t_plus on interior edges, the single trace on boundary edges. Multiplied
/// by the edge normal this is Pi_e([[v]]).
double dg_midpoint_jump(const DgFunction& v, const Mesh& mesh, int e);

/// Pi_e([[v]]) on every edge: the per-edge L2 projection of the jump onto
/// constants, evaluated exactly via the midpoint trace.
EdgeConstVec jump_mean_projection(const DgFunction& v, const Mesh& mesh);

/// Local lifting r_e(w) of a constant vector w on edge e, defined by
///   integral_Omega r_e(w).tau = -integral_e w.{tau}  for all tau in W_h.
/// Supported on the triangles incident to e:
///   r_e(w)|_T = -h_e/(2|T|) w on interior edges, -h_e/|T| w on boundary.
PwConstVec lift_local(int e, Point2 w, const Mesh& mesh);

/// Global lifting r(w) = sum_e r_e(w_e) for per-edge constant data w.
PwConstVec lift_global(const EdgeConstVec& w, const Mesh& mesh);

/// Mesh-dependent norm: ( sum_T |grad v|^2 |T| + sum_e |Pi_e([[v]])|^2 )^(1/2).
double norm_1h(const DgFunction& v, const Mesh& mesh);

/// Broken H1 seminorm ||grad_h v||: elementwise gradients are constant, so
/// the integral is exact.
double broken_h1(const DgFunction& v, const Mesh& mesh);
double broken_h1(const CrFunction& v, const Mesh& mesh);

/// Gradient of the CR function on triangle t.
Point2 cr_gradient(const CrFunction& v, const Mesh& mesh, int t);

/// Embeds a CR function into V_h (exact: same function, nodal coefficients).
DgFunction embed(const CrFunction& v, const Mesh& mesh);

inline DgFunction operator-(const DgFunction& a, const DgFunction& b) {
  DgFunction d = a;
  for (size_t i = 0; i < d.coeffs.size(); ++i) d.coeffs[i] -= b.coeffs[i];
  return d;
}

}  // namespace adg

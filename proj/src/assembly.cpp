#include "adg/assembly.hpp"

#include <algorithm>
#include <cmath>

#include "adg/quadrature.hpp"

namespace adg {

const char* method_name(MethodKind m) {
  switch (m) {
    case MethodKind::IP: return "ip";
    case MethodKind::LDG: return "ldg";
    case MethodKind::BrezziEtAl: return "brezzi";
    case MethodKind::BassiEtAl: return "bassi";
  }
  return "?";
}

double local_stiffness_spectral_radius(int t, const Mesh& mesh) {
  // S_T is 3x3 symmetric with zero row sums, so one eigenvalue is 0 and the
  // other two follow from the trace and the Frobenius norm.
  const double a = mesh.area[static_cast<size_t>(t)];
  const auto& g = mesh.grad_lambda[static_cast<size_t>(t)];
  double trace = 0.0, frob_sq = 0.0;
  for (int m = 0; m < 3; ++m) {
    for (int n = 0; n < 3; ++n) {
      const double s = a * dot(g[static_cast<size_t>(m)], g[static_cast<size_t>(n)]);
      if (m == n) trace += s;
      frob_sq += s * s;
    }
  }
  const double disc = std::max(0.0, 2.0 * frob_sq - trace * trace);
  return 0.5 * (trace + std::sqrt(disc));
}

double min_alpha(const Mesh& mesh, MethodKind method) {
  switch (method) {
    case MethodKind::IP: {
      double rho_max = 0.0;
      for (int t = 0; t < mesh.n_triangles(); ++t)
        rho_max = std::max(rho_max, local_stiffness_spectral_radius(t, mesh));
      return 4.0 * rho_max;
    }
    case MethodKind::LDG:
    case MethodKind::BrezziEtAl:
      return 0.0;
    case MethodKind::BassiEtAl:
      return 3.0;
  }
  return 0.0;
}

PenaltyReport penalty_report(const Mesh& mesh, MethodKind method, double alpha) {
  const double amin = min_alpha(mesh, method);
  return {method, alpha, amin, alpha > amin};
}

namespace {

/// Sparse dof/coefficient functional on the DG space, e.g. the midpoint
/// jump or the mean normal derivative on one edge.
struct Functional {
  int dofs[6];
  double coef[6];
  int size = 0;

  void push(int dof, double c) {
    dofs[size] = dof;
    coef[size] = c;
    ++size;
  }
};

/// Midpoint jump functional on edge e: j(v) = v_-(m_e) - v_+(m_e)
/// (one-sided trace on boundary edges). Pi_e([[v]]) = j(v) * n_e.
Functional jump_functional(const Mesh& mesh, int e) {
  Functional j;
  const Edge& edge = mesh.edges[static_cast<size_t>(e)];
  const int tm = edge.t_minus;
  j.push(3 * tm + mesh.local_vertex_index(tm, edge.v[0]), 0.5);
  j.push(3 * tm + mesh.local_vertex_index(tm, edge.v[1]), 0.5);
  if (!edge.is_boundary()) {
    const int tp = *edge.t_plus;
    j.push(3 * tp + mesh.local_vertex_index(tp, edge.v[0]), -0.5);
    j.push(3 * tp + mesh.local_vertex_index(tp, edge.v[1]), -0.5);
  }
  return j;
}

/// Mean normal derivative functional on edge e: g(v) = {grad v} . n_e.
Functional mean_normal_deriv_functional(const Mesh& mesh, int e) {
  Functional g;
  const Edge& edge = mesh.edges[static_cast<size_t>(e)];
  const double scale = edge.is_boundary() ? 1.0 : 0.5;
  const int tm = edge.t_minus;
  for (int k = 0; k < 3; ++k)
    g.push(3 * tm + k,
           scale * dot(mesh.grad_lambda[static_cast<size_t>(tm)][static_cast<size_t>(k)], edge.normal));
  if (!edge.is_boundary()) {
    const int tp = *edge.t_plus;
    for (int k = 0; k < 3; ++k)
      g.push(3 * tp + k,
             0.5 * dot(mesh.grad_lambda[static_cast<size_t>(tp)][static_cast<size_t>(k)], edge.normal));
  }
  return g;
}

/// Small dense symmetric accumulator over a gathered dof set; emits each
/// unordered pair once.
struct LocalMatrix {
  std::vector<int> dofs;
  std::vector<double> m;  // dofs.size()^2, row-major

  int local_index(int dof) {
    for (size_t i = 0; i < dofs.size(); ++i)
      if (dofs[i] == dof) return static_cast<int>(i);
    dofs.push_back(dof);
    return static_cast<int>(dofs.size()) - 1;
  }

  void gather(const Functional& f) {
    for (int i = 0; i < f.size; ++i) local_index(f.dofs[i]);
  }

  void start() { m.assign(dofs.size() * dofs.size(), 0.0); }

  /// m += weight * a b^T (callers add both a b^T and b a^T when needed).
  void add_outer(const Functional& a, const Functional& b, double weight) {
    const size_t n = dofs.size();
    for (int i = 0; i < a.size; ++i) {
      const size_t li = static_cast<size_t>(local_index(a.dofs[i]));
      for (int j = 0; j < b.size; ++j) {
        const size_t lj = static_cast<size_t>(local_index(b.dofs[j]));
        m[li * n + lj] += weight * a.coef[i] * b.coef[j];
      }
    }
  }

  void scatter(SparseSymMatrix& A) const {
    const size_t n = dofs.size();
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i; j < n; ++j) {
        const double v = m[i * n + j];
        if (v != 0.0) A.add(dofs[i], dofs[j], v);
      }
  }
};

/// One-pass assembler for all four methods:
///   common   = element stiffness - the two consistency edge terms
///   penalty  = sum_e Pi_e([[w]]) . Pi_e([[v]])                (x w_penalty)
///   glift    = (r(Pi[[w]]), r(Pi[[v]]))_Omega                 (x w_glift)
///   elift    = sum_e (r_e(Pi_e[[w]]), r_e(Pi_e[[v]]))_Omega   (x w_elift)
SparseSymMatrix assemble_weighted(const Mesh& mesh, bool include_common,
                                  double w_penalty, double w_glift, double w_elift) {
  SparseSymMatrix A(3 * mesh.n_triangles());

  if (include_common) {
    for (int t = 0; t < mesh.n_triangles(); ++t) {
      const double a = mesh.area[static_cast<size_t>(t)];
      const auto& g = mesh.grad_lambda[static_cast<size_t>(t)];
      for (int m = 0; m < 3; ++m)
        for (int n = m; n < 3; ++n)
          A.add(3 * t + m, 3 * t + n,
                a * dot(g[static_cast<size_t>(m)], g[static_cast<size_t>(n)]));
    }
  }

  if (include_common || w_penalty != 0.0 || w_elift != 0.0) {
    for (int e = 0; e < mesh.n_edges(); ++e) {
      const Edge& edge = mesh.edges[static_cast<size_t>(e)];
      const Functional j = jump_functional(mesh, e);

      LocalMatrix local;
      local.gather(j);
      Functional g;
      if (include_common) {
        g = mean_normal_deriv_functional(mesh, e);
        local.gather(g);
      }
      local.start();

      if (include_common) {
        // - integral_e {grad w}.[[v]] - integral_e {grad v}.[[w]]
        //   = -h_e ( g(w) j(v) + j(w) g(v) )   (P1 traces, constant normals).
        local.add_outer(g, j, -edge.length);
        local.add_outer(j, g, -edge.length);
      }
      if (w_penalty != 0.0) {
        // (alpha/h_e) integral_e Pi_e([[w]]).Pi_e([[v]]) = alpha j(w) j(v).
        local.add_outer(j, j, w_penalty);
      }
      if (w_elift != 0.0) {
        // integral_Omega r_e(Pi_e[[w]]).r_e(Pi_e[[v]]) over the 1-2 support
        // triangles of the local lifting.
        double factor;
        if (edge.is_boundary()) {
          factor = edge.length * edge.length / mesh.area[static_cast<size_t>(edge.t_minus)];
        } else {
          factor = 0.25 * edge.length * edge.length *
                   (1.0 / mesh.area[static_cast<size_t>(edge.t_minus)] +
                    1.0 / mesh.area[static_cast<size_t>(*edge.t_plus)]);
        }
        local.add_outer(j, j, w_elift * factor);
      }
      local.scatter(A);
    }
  }

  if (w_glift != 0.0) {
    // r(Pi[[w]])|_T = -(1/|T|) sum_{e in T} kappa_e h_e j_e(w) n_e with
    // kappa = 1/2 on interior and 1 on boundary edges, so the term couples
    // all pairs of edges of each triangle.
    for (int t = 0; t < mesh.n_triangles(); ++t) {
      const auto& eot = mesh.edge_of_triangle[static_cast<size_t>(t)];
      Functional jf[3];
      Point2 c[3];
      for (int k = 0; k < 3; ++k) {
        const Edge& edge = mesh.edges[static_cast<size_t>(eot[static_cast<size_t>(k)])];
        jf[k] = jump_functional(mesh, eot[static_cast<size_t>(k)]);
        const double kappa = edge.is_boundary() ? 1.0 : 0.5;
        c[k] = (kappa * edge.length) * edge.normal;
      }
      LocalMatrix local;
      for (int k = 0; k < 3; ++k) local.gather(jf[k]);
      local.start();
      const double inv_area = 1.0 / mesh.area[static_cast<size_t>(t)];
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          local.add_outer(jf[k], jf[l], w_glift * inv_area * dot(c[k], c[l]));
      local.scatter(A);
    }
  }

  A.finalize();
  return A;
}

}  // namespace

SparseSymMatrix assemble_common(const Mesh& mesh) {
  return assemble_weighted(mesh, true, 0.0, 0.0, 0.0);
}

SparseSymMatrix assemble_jump_penalty(const Mesh& mesh) {
  return assemble_weighted(mesh, false, 1.0, 0.0, 0.0);
}

SparseSymMatrix assemble_global_lifting(const Mesh& mesh) {
  return assemble_weighted(mesh, false, 0.0, 1.0, 0.0);
}

SparseSymMatrix assemble_edge_lifting(const Mesh& mesh) {
  return assemble_weighted(mesh, false, 0.0, 0.0, 1.0);
}

SparseSymMatrix assemble_system(const Mesh& mesh, MethodKind method, double alpha) {
  const PenaltyReport report = penalty_report(mesh, method, alpha);
  if (!report.admissible) {
    throw InadmissibleAlpha(
        std::string("assemble_system: alpha=") + std::to_string(alpha) +
            " inadmissible for method " + method_name(method) + " (requires alpha > " +
            std::to_string(report.alpha_min) + ")",
        report);
  }
  switch (method) {
    case MethodKind::IP:
      return assemble_weighted(mesh, true, alpha, 0.0, 0.0);
    case MethodKind::LDG:
      return assemble_weighted(mesh, true, alpha, 1.0, 0.0);
    case MethodKind::BrezziEtAl:
      return assemble_weighted(mesh, true, 0.0, 1.0, alpha);
    case MethodKind::BassiEtAl:
      return assemble_weighted(mesh, true, 0.0, 0.0, alpha);
  }
  throw std::logic_error("assemble_system: unknown method");
}

std::vector<double> assemble_rhs(const Mesh& mesh, const ScalarField& f) {
  const TriQuadRule& rule = tri_quad_degree4();
  std::vector<double> b(static_cast<size_t>(3 * mesh.n_triangles()), 0.0);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const Point2 p0 = mesh.vertex_of(t, 0);
    const Point2 p1 = mesh.vertex_of(t, 1);
    const Point2 p2 = mesh.vertex_of(t, 2);
    const double a = mesh.area[static_cast<size_t>(t)];
    for (const TriQuadPoint& q : rule.points) {
      const double fw = a * q.w * f(bary_to_point(q, p0, p1, p2));
      b[static_cast<size_t>(3 * t + 0)] += fw * q.l0;
      b[static_cast<size_t>(3 * t + 1)] += fw * q.l1;
      b[static_cast<size_t>(3 * t + 2)] += fw * q.l2;
    }
  }
  return b;
}

CrSystem assemble_cr_system(const Mesh& mesh, const ScalarField& f) {
  std::vector<int> dof_of_edge(static_cast<size_t>(mesh.n_edges()), -1);
  std::vector<int> edge_of_dof;
  for (int e = 0; e < mesh.n_edges(); ++e) {
    if (!mesh.edges[static_cast<size_t>(e)].is_boundary()) {
      dof_of_edge[static_cast<size_t>(e)] = static_cast<int>(edge_of_dof.size());
      edge_of_dof.push_back(e);
    }
  }

  CrSystem sys{SparseSymMatrix(static_cast<int>(edge_of_dof.size())),
               std::vector<double>(edge_of_dof.size(), 0.0),
               std::move(edge_of_dof), std::move(dof_of_edge)};

  const TriQuadRule& rule = tri_quad_degree4();
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const double a = mesh.area[static_cast<size_t>(t)];
    const auto& g = mesh.grad_lambda[static_cast<size_t>(t)];
    const auto& eot = mesh.edge_of_triangle[static_cast<size_t>(t)];
    int dof[3];
    for (int k = 0; k < 3; ++k) dof[k] = sys.dof_of_edge[static_cast<size_t>(eot[static_cast<size_t>(k)])];

    // CR basis on T for the edge opposite vertex k: phi_k = 1 - 2 lambda_k.
    for (int k = 0; k < 3; ++k) {
      if (dof[k] < 0) continue;
      for (int l = k; l < 3; ++l) {
        if (dof[l] < 0) continue;
        sys.matrix.add(dof[k], dof[l],
                       4.0 * a * dot(g[static_cast<size_t>(k)], g[static_cast<size_t>(l)]));
      }
    }
    const Point2 p0 = mesh.vertex_of(t, 0);
    const Point2 p1 = mesh.vertex_of(t, 1);
    const Point2 p2 = mesh.vertex_of(t, 2);
    for (const TriQuadPoint& q : rule.points) {
      const double fw = a * q.w * f(bary_to_point(q, p0, p1, p2));
      const double lambda[3] = {q.l0, q.l1, q.l2};
      for (int k = 0; k < 3; ++k)
        if (dof[k] >= 0) sys.rhs[static_cast<size_t>(dof[k])] += fw * (1.0 - 2.0 * lambda[k]);
    }
  }
  sys.matrix.finalize();
  return sys;
}

CrFunction cr_from_dofs(const CrSystem& sys, const std::vector<double>& dofs,
                        const Mesh& mesh) {
  CrFunction out = CrFunction::zeros(mesh);
  for (size_t d = 0; d < sys.edge_of_dof.size(); ++d)
    out.midpoint_values[static_cast<size_t>(sys.edge_of_dof[d])] = dofs[d];
  return out;
}

}  // namespace adg

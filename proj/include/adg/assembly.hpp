#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "adg/dg_space.hpp"
#include "adg/mesh.hpp"
#include "adg/sparse.hpp"

namespace adg {

using ScalarField = std::function<double(Point2)>;

/// The four weakly penalized symmetric DG variants.
enum class MethodKind { IP, LDG, BrezziEtAl, BassiEtAl };

const char* method_name(MethodKind m);

/// Penalty admissibility per method: the assembled form is coercive for
/// every alpha strictly above alpha_min.
struct PenaltyReport {
  MethodKind method;
  double alpha;
  double alpha_min;
  bool admissible;  ///< alpha > alpha_min
};

struct InadmissibleAlpha : std::invalid_argument {
  InadmissibleAlpha(const std::string& what, PenaltyReport r)
      : std::invalid_argument(what), report(r) {}
  PenaltyReport report;
};

/// Spectral radius of the local stiffness matrix
/// [S_T]_{mn} = (grad lambda_m, grad lambda_n)_T. One eigenvalue is always
/// zero (rows sum to zero), the remaining pair comes from trace invariants.
double local_stiffness_spectral_radius(int t, const Mesh& mesh);

/// Stability threshold: IP needs alpha > 4 max_T rho(S_T); LDG and the
/// Brezzi et al. variant need alpha > 0; the Bassi et al. variant alpha > 3.
double min_alpha(const Mesh& mesh, MethodKind method);

PenaltyReport penalty_report(const Mesh& mesh, MethodKind method, double alpha);

/// Assembles the DG bilinear form for the given method on the per-triangle
/// nodal basis (dof 3t+k = value at vertex k of triangle t). Throws
/// InadmissibleAlpha unless alpha > min_alpha(mesh, method).
///
/// All edge and element integrals are closed-form (P1 traces and constant
/// liftings), so the matrix realizes the bilinear form exactly.
SparseSymMatrix assemble_system(const Mesh& mesh, MethodKind method, double alpha);

// The individual building blocks, exposed so tests can verify the method
// matrices term by term. assemble_system combines them.
SparseSymMatrix assemble_common(const Mesh& mesh);          ///< stiffness - both consistency terms
SparseSymMatrix assemble_jump_penalty(const Mesh& mesh);    ///< sum_e Pi_e([[w]]).Pi_e([[v]]) (unit alpha)
SparseSymMatrix assemble_global_lifting(const Mesh& mesh);  ///< (r(Pi[[w]]), r(Pi[[v]]))_Omega
SparseSymMatrix assemble_edge_lifting(const Mesh& mesh);    ///< sum_e (r_e(Pi_e[[w]]), r_e(Pi_e[[v]]))_Omega (unit alpha)

/// Load vector (f, phi_i) via the fixed degree-4 symmetric triangle rule.
std::vector<double> assemble_rhs(const Mesh& mesh, const ScalarField& f);

/// Crouzeix-Raviart system on the interior-edge midpoint basis, boundary
/// midpoints eliminated as zero.
struct CrSystem {
  SparseSymMatrix matrix;
  std::vector<double> rhs;
  std::vector<int> edge_of_dof;  ///< interior edge index per CR dof
  std::vector<int> dof_of_edge;  ///< CR dof per edge, -1 on boundary edges
};

CrSystem assemble_cr_system(const Mesh& mesh, const ScalarField& f);

/// Expands a CR coefficient vector (interior dofs) into a CrFunction.
CrFunction cr_from_dofs(const CrSystem& sys, const std::vector<double>& dofs,
                        const Mesh& mesh);

}  // namespace adg

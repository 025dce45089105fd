#pragma once

#include <optional>

#include "adg/assembly.hpp"
#include "adg/dg_space.hpp"

namespace adg {

/// Auxiliary solution u_h* in V_CR: the average of the two one-sided
/// midpoint traces on interior edges, zero on boundary midpoints.
CrFunction average_to_cr(const DgFunction& u_h, const Mesh& mesh);

/// Residual of the integral relation (holds for every u_h, v_h in V_h):
///   sum_T (grad u_h, grad v_h)_T - sum_e ({grad v_h}, [[u_h]])_e
///     = sum_T (grad u_h*, grad v_h)_T
/// with u_h* = average_to_cr(u_h). Returns the absolute defect.
double integral_relation_residual(const DgFunction& u_h, const DgFunction& v_h,
                                  const Mesh& mesh);

/// Residual of the energy identity A_h(d,d) = (f,d) with d = u_h - u_h*,
/// valid when u_h solves the DG system for (method, alpha, f). The discrete
/// load (f,d) is evaluated through the assembled right-hand side so that the
/// identity holds up to solver tolerance. Returns |A_h(d,d) - (f,d)|.
double energy_identity_residual(const DgFunction& u_h, const ScalarField& f,
                                const Mesh& mesh, MethodKind method, double alpha);

/// Data oscillation term ||hf||^2 = sum_T h_T^2 ||f||_{L2(T)}^2 (degree-4 rule).
double hf_norm_sq(const Mesh& mesh, const ScalarField& f);

/// Observed constant of the volume bound: ||u_h* - u_h||_{1,h}^2 / ||hf||^2.
/// Empty when ||hf|| = 0 (the ratio is undefined).
std::optional<double> volume_bound_constant(const DgFunction& u_h,
                                            const CrFunction& u_h_star,
                                            const ScalarField& f, const Mesh& mesh);

/// Left-hand side of the jump control estimate:
///   sum_T ( h_T^{-2} ||u_h - u_h*||_{L2(T)}^2 + ||grad(u_h - u_h*)||_{L2(T)}^2 ).
/// The L2 norms use the exact P1 element mass matrix. Tests monitor the ratio
/// of this against sum_e |Pi_e([[u_h]])|^2.
double jump_control_lhs(const DgFunction& u_h, const CrFunction& u_h_star,
                        const Mesh& mesh);

}  // namespace adg

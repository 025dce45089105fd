#pragma once

#include <vector>

#include "adg/sparse.hpp"

namespace adg {

struct SolveReport {
  int iterations = 0;
  /// ||b - A x|| / ||b||, recomputed from scratch (not the CG recurrence).
  double relative_residual = 0.0;
  bool converged = false;
};

/// Conjugate gradients with Jacobi (diagonal) preconditioning.
/// Deterministic for fixed inputs; single-threaded. max_iterations < 0
/// means 10 * dimension.
std::pair<std::vector<double>, SolveReport> solve_spd(
    const SparseSymMatrix& A, const std::vector<double>& b,
    double rel_tol = 1e-10, int max_iterations = -1);

}  // namespace adg

#include "adg/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace adg {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace

std::pair<std::vector<double>, SolveReport> solve_spd(const SparseSymMatrix& A,
                                                      const std::vector<double>& b,
                                                      double rel_tol,
                                                      int max_iterations) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0))
    throw std::invalid_argument("solve_spd: rel_tol must be in (0,1)");
  const int n = A.dim();
  if (static_cast<int>(b.size()) != n)
    throw std::invalid_argument("solve_spd: dimension mismatch");
  if (max_iterations < 0) max_iterations = 10 * n;

  std::vector<double> x(static_cast<size_t>(n), 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0 || n == 0) return {x, {0, 0.0, true}};

  std::vector<double> inv_diag = A.diagonal();
  for (double& d : inv_diag) d = (d > 0.0) ? 1.0 / d : 1.0;

  std::vector<double> r = b;
  std::vector<double> z(static_cast<size_t>(n)), p(static_cast<size_t>(n)),
      q(static_cast<size_t>(n));
  for (size_t i = 0; i < z.size(); ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = dot(r, z);

  auto true_residual = [&]() {
    A.multiply(x, q);
    double s = 0.0;
    for (size_t i = 0; i < q.size(); ++i) {
      const double ri = b[i] - q[i];
      s += ri * ri;
    }
    return std::sqrt(s);
  };

  int it = 0;
  while (it < max_iterations) {
    A.multiply(p, q);
    const double pq = dot(p, q);
    if (pq <= 0.0) break;  // not SPD or breakdown; report what we have
    const double step = rz / pq;
    for (size_t i = 0; i < x.size(); ++i) x[i] += step * p[i];
    for (size_t i = 0; i < r.size(); ++i) r[i] -= step * q[i];
    ++it;

    if (norm2(r) <= rel_tol * bnorm) {
      // The recurrence residual can drift; accept only the true residual.
      const double res = true_residual();
      if (res <= rel_tol * bnorm) return {x, {it, res / bnorm, true}};
      A.multiply(x, q);
      for (size_t i = 0; i < r.size(); ++i) r[i] = b[i] - q[i];
    }

    for (size_t i = 0; i < z.size(); ++i) z[i] = inv_diag[i] * r[i];
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    for (size_t i = 0; i < p.size(); ++i) p[i] = z[i] + beta * p[i];
    rz = rz_next;
  }

  const double res = true_residual();
  return {x, {it, res / bnorm, res <= rel_tol * bnorm}};
}

}  // namespace adg

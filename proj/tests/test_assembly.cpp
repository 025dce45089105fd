#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "adg/assembly.hpp"
#include "oracles.hpp"

using namespace adg;

namespace {

Mesh two_triangle_square() {
  return build_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}});
}

Mesh lshape_macro() {
  return build_mesh(
      {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}},
      {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 6}, {0, 6, 7}});
}

Mesh uniform(Mesh m, int levels) {
  for (int l = 0; l < levels; ++l) {
    std::vector<int> all(static_cast<size_t>(m.n_edges()));
    std::iota(all.begin(), all.end(), 0);
    m = refine(m, all).first;
  }
  return m;
}

std::map<std::pair<int, int>, double> entries(const SparseSymMatrix& A) {
  std::map<std::pair<int, int>, double> out;
  A.for_each_upper([&](int i, int j, double v) { out[{i, j}] = v; });
  return out;
}

oracles::Dense to_dense(const SparseSymMatrix& A) {
  oracles::Dense D(A.dim());
  A.for_each_upper([&](int i, int j, double v) {
    D.at(i, j) = v;
    if (i != j) D.at(j, i) = v;
  });
  return D;
}

constexpr MethodKind kAllMethods[] = {MethodKind::IP, MethodKind::LDG,
                                      MethodKind::BrezziEtAl, MethodKind::BassiEtAl};

double admissible_alpha(const Mesh& mesh, MethodKind method) {
  switch (method) {
    case MethodKind::IP: return 1.01 * min_alpha(mesh, method);
    case MethodKind::LDG:
    case MethodKind::BrezziEtAl: return 0.01;
    case MethodKind::BassiEtAl: return 3.01;
  }
  return 1.0;
}

}  // namespace

TEST_CASE("local stiffness spectral radius") {
  // Unit right triangle: S_T = 1/2 [[2,-1,-1],[-1,1,0],[-1,0,1]],
  // eigenvalues {0, 1/2, 3/2}.
  const Mesh m = build_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  CHECK(local_stiffness_spectral_radius(0, m) == doctest::Approx(1.5).epsilon(1e-14));

  oracles::Dense S(3);
  S.at(0, 0) = 1.0;
  S.at(0, 1) = S.at(1, 0) = -0.5;
  S.at(0, 2) = S.at(2, 0) = -0.5;
  S.at(1, 1) = 0.5;
  S.at(2, 2) = 0.5;
  const std::vector<double> ev = oracles::eigenvalues_sym(S);
  CHECK(ev.back() == doctest::Approx(1.5).epsilon(1e-12));

  // Scale invariance: 2D stiffness does not change under uniform scaling.
  const Mesh scaled = build_mesh({{0, 0}, {7, 0}, {0, 7}}, {{0, 1, 2}});
  CHECK(local_stiffness_spectral_radius(0, scaled) ==
        doctest::Approx(1.5).epsilon(1e-13));

  // Generic triangle against the dense eigen oracle.
  const Mesh generic = build_mesh({{0.1, -0.2}, {1.3, 0.4}, {0.2, 1.7}}, {{0, 1, 2}});
  oracles::Dense Sg(3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      Sg.at(a, b) = generic.area[0] * dot(generic.grad_lambda[0][static_cast<size_t>(a)],
                                          generic.grad_lambda[0][static_cast<size_t>(b)]);
  const std::vector<double> evg = oracles::eigenvalues_sym(Sg);
  CHECK(local_stiffness_spectral_radius(0, generic) ==
        doctest::Approx(evg.back()).epsilon(1e-12));
}

TEST_CASE("min_alpha thresholds per method") {
  const Mesh m = two_triangle_square();  // right isosceles triangles: rho = 3/2
  CHECK(min_alpha(m, MethodKind::IP) == doctest::Approx(6.0).epsilon(1e-13));
  CHECK(min_alpha(m, MethodKind::LDG) == 0.0);
  CHECK(min_alpha(m, MethodKind::BrezziEtAl) == 0.0);
  CHECK(min_alpha(m, MethodKind::BassiEtAl) == 3.0);

  const PenaltyReport ok = penalty_report(m, MethodKind::IP, 6.1);
  CHECK(ok.admissible);
  const PenaltyReport bad = penalty_report(m, MethodKind::IP, 6.0);  // strict
  CHECK_FALSE(bad.admissible);
}

TEST_CASE("inadmissible alpha is rejected with a report") {
  const Mesh m = two_triangle_square();
  try {
    assemble_system(m, MethodKind::IP, 1.0);
    FAIL("expected InadmissibleAlpha");
  } catch (const InadmissibleAlpha& e) {
    CHECK(e.report.alpha == 1.0);
    CHECK(e.report.alpha_min == doctest::Approx(6.0));
    CHECK_FALSE(e.report.admissible);
  }
  CHECK_THROWS_AS(assemble_system(m, MethodKind::BassiEtAl, 2.9), InadmissibleAlpha);
}

TEST_CASE("IP quadratic form on the constant function is 4 alpha") {
  const Mesh m = two_triangle_square();
  const double alpha = 7.5;
  const SparseSymMatrix A = assemble_system(m, MethodKind::IP, alpha);
  const std::vector<double> ones(static_cast<size_t>(A.dim()), 1.0);
  // Gradients and mean gradients vanish; each of the 4 boundary edges
  // contributes alpha * (unit jump mean)^2.
  CHECK(A.quadratic_form(ones) == doctest::Approx(4.0 * alpha).epsilon(1e-13));
}

TEST_CASE("LDG and Brezzi differ by the term matrices") {
  const Mesh m = uniform(two_triangle_square(), 1);
  const double alpha = 0.37;
  const auto ldg = entries(assemble_system(m, MethodKind::LDG, alpha));
  const auto brezzi = entries(assemble_system(m, MethodKind::BrezziEtAl, alpha));
  const auto penalty = entries(assemble_jump_penalty(m));
  const auto elift = entries(assemble_edge_lifting(m));

  // LDG - Brezzi = alpha * (penalty - edge lifting), entry by entry.
  std::map<std::pair<int, int>, double> expected;
  for (const auto& [key, v] : penalty) expected[key] += alpha * v;
  for (const auto& [key, v] : elift) expected[key] -= alpha * v;
  std::map<std::pair<int, int>, double> actual;
  for (const auto& [key, v] : ldg) actual[key] += v;
  for (const auto& [key, v] : brezzi) actual[key] -= v;

  for (const auto& [key, v] : expected) {
    CAPTURE(key.first);
    CAPTURE(key.second);
    CHECK(actual[key] == doctest::Approx(v).epsilon(1e-12));
    actual.erase(key);
  }
  for (const auto& [key, v] : actual) CHECK(std::abs(v) <= 1e-13);
}

TEST_CASE("penalty block is linear in alpha (IP)") {
  const Mesh m = two_triangle_square();
  const auto a1 = entries(assemble_system(m, MethodKind::IP, 7.0));
  const auto a2 = entries(assemble_system(m, MethodKind::IP, 11.0));
  const auto pen = entries(assemble_jump_penalty(m));
  for (const auto& [key, v] : a2) {
    const auto it1 = a1.find(key);
    REQUIRE(it1 != a1.end());
    const auto itp = pen.find(key);
    const double p = itp == pen.end() ? 0.0 : itp->second;
    CHECK(v - it1->second == doctest::Approx(4.0 * p).epsilon(1e-12));
  }
}

TEST_CASE("load vector against symbolic integrals") {
  const Mesh single = build_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});

  const std::vector<double> zero = assemble_rhs(single, [](Point2) { return 0.0; });
  for (double v : zero) CHECK(v == 0.0);

  // f = 1: each entry is integral lambda_m = |T|/3 = 1/6.
  const std::vector<double> ones = assemble_rhs(single, [](Point2) { return 1.0; });
  for (double v : ones) CHECK(v == doctest::Approx(1.0 / 6.0).epsilon(1e-14));

  // f = x on the unit right triangle: (1/24, 1/12, 1/24) by symbolic
  // integration of lambda_m * lambda_1.
  const std::vector<double> fx = assemble_rhs(single, [](Point2 p) { return p.x; });
  CHECK(fx[0] == doctest::Approx(1.0 / 24.0).epsilon(1e-14));
  CHECK(fx[1] == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
  CHECK(fx[2] == doctest::Approx(1.0 / 24.0).epsilon(1e-14));
}

TEST_CASE("CR system on the two-triangle square") {
  const Mesh m = two_triangle_square();
  const CrSystem sys = assemble_cr_system(m, [](Point2) { return 1.0; });
  REQUIRE(sys.matrix.dim() == 1);  // one interior edge

  // Hand assembly: both triangles contribute 4 |T| |grad lambda_opp|^2.
  double expected = 0.0;
  for (int t = 0; t < 2; ++t) {
    const auto& eot = m.edge_of_triangle[static_cast<size_t>(t)];
    for (int k = 0; k < 3; ++k) {
      if (m.edges[static_cast<size_t>(eot[static_cast<size_t>(k)])].is_boundary()) continue;
      const Point2 g = m.grad_lambda[static_cast<size_t>(t)][static_cast<size_t>(k)];
      expected += 4.0 * m.area[static_cast<size_t>(t)] * dot(g, g);
    }
  }
  CHECK(expected == doctest::Approx(8.0).epsilon(1e-14));
  double diag = 0.0;
  sys.matrix.for_each_upper([&](int, int, double v) { diag = v; });
  CHECK(diag == doctest::Approx(expected).epsilon(1e-14));

  const CrSystem zero_sys = assemble_cr_system(m, [](Point2) { return 0.0; });
  for (double v : zero_sys.rhs) CHECK(v == 0.0);

  const Mesh single = build_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  const CrSystem empty = assemble_cr_system(single, [](Point2) { return 1.0; });
  CHECK(empty.matrix.dim() == 0);
}

TEST_CASE("coercivity: observed constant is positive for all methods") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (const Mesh& m : {uniform(two_triangle_square(), 2), lshape_macro()}) {
    for (MethodKind method : kAllMethods) {
      const double alpha = admissible_alpha(m, method);
      const SparseSymMatrix A = assemble_system(m, method, alpha);
      double c_obs = 1e300;
      for (int trial = 0; trial < 100; ++trial) {
        DgFunction v = DgFunction::zeros(m);
        for (double& c : v.coeffs) c = unit(rng);
        const double n = norm_1h(v, m);
        c_obs = std::min(c_obs, A.quadratic_form(v.coeffs) / (n * n));
      }
      CAPTURE(method_name(method));
      CHECK(c_obs > 0.0);
      MESSAGE("coercivity c_obs for ", method_name(method), ": ", c_obs);
    }
  }
}

TEST_CASE("for CR arguments the IP form reduces to the broken H1 product") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const Mesh m = uniform(two_triangle_square(), 2);
  const SparseSymMatrix A = assemble_system(m, MethodKind::IP, 6.1);
  for (int trial = 0; trial < 5; ++trial) {
    CrFunction v = CrFunction::zeros(m);
    for (int e = 0; e < m.n_edges(); ++e)
      if (!m.edges[static_cast<size_t>(e)].is_boundary())
        v.midpoint_values[static_cast<size_t>(e)] = unit(rng);
    const DgFunction vd = embed(v, m);
    const double h1 = broken_h1(vd, m);
    CHECK(A.quadratic_form(vd.coeffs) == doctest::Approx(h1 * h1).epsilon(1e-12));
  }
}

TEST_CASE("assembled matrices are positive definite for admissible alpha") {
  const Mesh m = uniform(two_triangle_square(), 2);  // 96 dofs
  for (MethodKind method : kAllMethods) {
    const SparseSymMatrix A = assemble_system(m, method, admissible_alpha(m, method));
    const std::vector<double> ev = oracles::eigenvalues_sym(to_dense(A));
    CAPTURE(method_name(method));
    CHECK(ev.front() > 0.0);
  }
}

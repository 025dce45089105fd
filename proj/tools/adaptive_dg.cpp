// Command-line front end for the adaptive DG solver.
//
//   adaptive-dg run    --method ip --marking ch --problem lshape-const ...
//   adaptive-dg verify --problem square-sine --method ldg
//   adaptive-dg sweep  --problem square-sine --out results/
//
// Exit codes: 0 success, 2 invalid configuration, 3 solver failure,
// 4 verification failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "adg/driver.hpp"
#include "adg/postprocess.hpp"
#include "adg/quadrature.hpp"
#include "adg/solver.hpp"

namespace {

constexpr int kExitInvalidConfig = 2;
constexpr int kExitSolverFailure = 3;
constexpr int kExitVerifyFailure = 4;

adg::MethodKind parse_method(const std::string& s) {
  if (s == "ip") return adg::MethodKind::IP;
  if (s == "ldg") return adg::MethodKind::LDG;
  if (s == "brezzi") return adg::MethodKind::BrezziEtAl;
  if (s == "bassi") return adg::MethodKind::BassiEtAl;
  throw std::invalid_argument("unknown method: " + s);
}

std::optional<double> parse_alpha(const std::string& s) {
  if (s == "auto") return std::nullopt;
  size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad alpha: " + s);
  return v;
}

struct CommonOpts {
  std::string method = "ip";
  std::string alpha = "auto";
  std::string problem = "square-sine";
  double rel_tol = 1e-10;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--method", o.method, "DG variant: ip|ldg|brezzi|bassi")
      ->check(CLI::IsMember({"ip", "ldg", "brezzi", "bassi"}));
  cmd->add_option("--alpha", o.alpha, "penalty parameter, or 'auto'");
  cmd->add_option("--problem", o.problem,
                  "square-sine | lshape-const | path to a node/element mesh file");
  cmd->add_option("--rel-tol", o.rel_tol, "solver relative residual tolerance");
}

int run_command(const CommonOpts& common, const adg::RunConfig& cfg_in) {
  adg::RunConfig cfg = cfg_in;
  cfg.method = parse_method(common.method);
  cfg.alpha = parse_alpha(common.alpha);
  cfg.problem = common.problem;
  cfg.rel_tol = common.rel_tol;
  cfg.validate();

  const adg::ConvergenceHistory history = adg::adapt_loop(cfg);
  if (history.solver_failed) {
    std::cerr << "solver failed to converge; partial history persisted\n";
    return kExitSolverFailure;
  }
  for (const adg::ConvergenceRecord& r : history.records) {
    std::printf("iter %3d  ndof %7d  eta^2 %.6e", r.iteration, r.ndof, r.eta_sq_total);
    if (r.energy_error) std::printf("  |u-u_h|_h %.6e", *r.energy_error);
    if (r.ratio) std::printf("  ratio %.4f", *r.ratio);
    std::printf("\n");
  }
  std::printf("observed: C* = %.4g, max rho2 = %.4g\n", history.c_star_obs,
              history.rho2_obs_max);
  if (cfg.out_dir) std::printf("outputs written to %s\n", cfg.out_dir->c_str());
  return 0;
}

struct Check {
  std::string name;
  double value;
  double threshold;
  bool ok() const { return value <= threshold; }
};

int verify_command(const CommonOpts& common, int levels,
                   const std::string& dump_matrix_path) {
  const adg::Problem problem = adg::resolve_problem(common.problem);
  const adg::MethodKind method = parse_method(common.method);
  const std::optional<double> alpha_opt = parse_alpha(common.alpha);

  std::vector<Check> checks;
  std::mt19937 rng(20240517);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  adg::Mesh mesh = problem.initial_mesh;
  for (int level = 0; level < levels; ++level) {
    if (level > 0) {
      std::vector<int> all(static_cast<size_t>(mesh.n_edges()));
      std::iota(all.begin(), all.end(), 0);
      mesh = adg::refine(mesh, all).first;
    }
    const std::string tag = "level " + std::to_string(level) + ": ";

    // Lifting adjoint identity against every incident W_h basis field.
    double lift_res = 0.0;
    for (int e = 0; e < mesh.n_edges(); ++e) {
      const adg::Edge& edge = mesh.edges[static_cast<size_t>(e)];
      const adg::Point2 w{unit(rng), unit(rng)};
      const adg::PwConstVec r = adg::lift_local(e, w, mesh);
      const int tris[2] = {edge.t_minus, edge.is_boundary() ? -1 : *edge.t_plus};
      for (int ti : tris) {
        if (ti < 0) continue;
        for (const adg::Point2 dir : {adg::Point2{1, 0}, adg::Point2{0, 1}}) {
          const double vol = mesh.area[static_cast<size_t>(ti)] *
                             dot(r.values[static_cast<size_t>(ti)], dir);
          const double mean = edge.is_boundary() ? 1.0 : 0.5;
          const double edge_int = edge.length * mean * dot(w, dir);
          lift_res = std::max(lift_res, std::abs(vol + edge_int));
        }
      }
    }
    checks.push_back({tag + "lifting adjoint identity", lift_res, 1e-13});

    const double alpha = alpha_opt ? *alpha_opt : adg::auto_alpha(mesh, method);
    const adg::SparseSymMatrix A = adg::assemble_system(mesh, method, alpha);
    const std::vector<double> b = adg::assemble_rhs(mesh, problem.f);
    auto [u_vec, report] = adg::solve_spd(A, b, common.rel_tol);
    if (!report.converged) {
      std::cerr << "verify: solver failed to converge\n";
      return kExitSolverFailure;
    }
    const adg::DgFunction u_h{std::move(u_vec)};

    // Integral relation (holds for arbitrary pairs, not just solutions).
    double rel_res = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      adg::DgFunction a = adg::DgFunction::zeros(mesh);
      adg::DgFunction v = adg::DgFunction::zeros(mesh);
      for (double& c : a.coeffs) c = unit(rng);
      for (double& c : v.coeffs) c = unit(rng);
      const double scale =
          std::max(adg::broken_h1(a, mesh) * adg::broken_h1(v, mesh), 1e-30);
      rel_res = std::max(rel_res, adg::integral_relation_residual(a, v, mesh) / scale);
    }
    checks.push_back({tag + "integral relation (random pairs)", rel_res, 1e-12});

    const double add = A.quadratic_form(
        (u_h - adg::embed(adg::average_to_cr(u_h, mesh), mesh)).coeffs);
    const double energy_res =
        adg::energy_identity_residual(u_h, problem.f, mesh, method, alpha);
    checks.push_back({tag + "energy identity (solved system)",
                      energy_res / std::max(std::abs(add), 1e-30), 1e-8});

    // Post-processed DG solution vs directly assembled CR solution.
    const adg::CrFunction u_star = adg::average_to_cr(u_h, mesh);
    const adg::CrSystem cr = adg::assemble_cr_system(mesh, problem.f);
    auto [cr_vec, cr_report] = adg::solve_spd(cr.matrix, cr.rhs, common.rel_tol);
    if (!cr_report.converged) {
      std::cerr << "verify: CR solver failed to converge\n";
      return kExitSolverFailure;
    }
    const adg::CrFunction u_cr = adg::cr_from_dofs(cr, cr_vec, mesh);
    adg::CrFunction diff = u_star;
    for (size_t i = 0; i < diff.midpoint_values.size(); ++i)
      diff.midpoint_values[i] -= u_cr.midpoint_values[i];
    const double cr_norm = std::max(adg::broken_h1(u_cr, mesh), 1e-30);
    checks.push_back(
        {tag + "CR equivalence", adg::broken_h1(diff, mesh) / cr_norm, 1e-8});

    // V_CR membership of the post-processed solution.
    const adg::EdgeConstVec jumps =
        adg::jump_mean_projection(adg::embed(u_star, mesh), mesh);
    double jump_max = 0.0;
    for (const adg::Point2& j : jumps.values)
      jump_max = std::max(jump_max, adg::norm(j));
    checks.push_back({tag + "projected jumps of u_h*", jump_max, 1e-14});

    if (!dump_matrix_path.empty() && level == 0) {
      std::ofstream out(dump_matrix_path);
      adg::write_matrix_coordinate(A, out);
    }
  }

  bool all_ok = true;
  for (const Check& c : checks) {
    std::printf("%-45s %12.4e  (<= %g)  %s\n", c.name.c_str(), c.value, c.threshold,
                c.ok() ? "ok" : "FAIL");
    all_ok = all_ok && c.ok();
  }
  return all_ok ? 0 : kExitVerifyFailure;
}

int sweep_command(const CommonOpts& common, int max_iterations, int max_dofs,
                  const std::string& out) {
  std::printf("%-8s %-4s %6s %9s %14s %12s\n", "method", "mark", "iters", "ndof",
              "eta_sq_total", "max_ratio>=5");
  for (const std::string m : {"ip", "ldg", "brezzi", "bassi"}) {
    for (const std::string strat : {"ch", "bms"}) {
      adg::RunConfig cfg;
      cfg.method = parse_method(m);
      cfg.alpha = parse_alpha(common.alpha);
      cfg.problem = common.problem;
      cfg.rel_tol = common.rel_tol;
      cfg.max_iterations = max_iterations;
      cfg.max_dofs = max_dofs;
      cfg.marking.strategy = strat == "ch" ? adg::MarkingStrategy::CarstensenHoppe
                                           : adg::MarkingStrategy::BeckerMaoShi;
      cfg.write_snapshots = false;
      if (!out.empty()) cfg.out_dir = std::filesystem::path(out) / (m + "_" + strat);
      const adg::ConvergenceHistory h = adg::adapt_loop(cfg);
      if (h.solver_failed) {
        std::printf("%-8s %-4s  solver failure\n", m.c_str(), strat.c_str());
        continue;
      }
      double max_ratio = 0.0;
      for (const adg::ConvergenceRecord& r : h.records)
        if (r.iteration >= 5 && r.ratio) max_ratio = std::max(max_ratio, *r.ratio);
      const adg::ConvergenceRecord& last = h.records.back();
      std::printf("%-8s %-4s %6zu %9d %14.6e %12.4f\n", m.c_str(), strat.c_str(),
                  h.records.size(), last.ndof, last.eta_sq_total, max_ratio);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive discontinuous Galerkin solver for the 2D Poisson problem"};
  app.require_subcommand(1);

  CommonOpts common;
  adg::RunConfig cfg;
  std::string marking = "ch";
  std::string out_dir;
  double theta = -1.0;
  bool no_snapshots = false;

  CLI::App* run = app.add_subcommand("run", "run the adaptive loop");
  add_common(run, common);
  run->add_option("--marking", marking, "marking strategy: ch|bms")
      ->check(CLI::IsMember({"ch", "bms"}));
  run->add_option("--theta", theta, "bulk fraction for edge marking (CH and BMS)");
  run->add_option("--sigma", cfg.marking.sigma, "BMS volume bulk fraction");
  run->add_option("--sigma-osc", cfg.marking.sigma_osc,
                  "CH supplementary volume fraction");
  run->add_option("--gamma-switch", cfg.marking.gamma_switch, "BMS branch switch");
  run->add_option("--gamma-monitor", cfg.gamma_monitor,
                  "weight of ||hf||^2 in the monitored contraction quantity");
  run->add_option("--max-dofs", cfg.max_dofs, "stop once ndof exceeds this");
  run->add_option("--max-iterations", cfg.max_iterations, "iteration cap");
  run->add_option("--solver-max-iters", cfg.solver_max_iterations,
                  "CG iteration cap (default 10n)");
  run->add_flag("--uniform", cfg.uniform_refinement, "uniform instead of adaptive");
  run->add_flag("--no-snapshots", no_snapshots, "skip per-iteration mesh files");
  run->add_flag("--export-estimator", cfg.export_estimator,
                "write per-iteration estimator CSVs");
  run->add_option("--out", out_dir, "output directory (history.csv, report.json)");

  int levels = 3;
  std::string dump_matrix;
  CLI::App* verify = app.add_subcommand("verify", "run the identity checks");
  add_common(verify, common);
  verify->add_option("--levels", levels, "uniform refinement levels to test")
      ->check(CLI::Range(1, 8));
  verify->add_option("--dump-matrix", dump_matrix,
                     "write the level-0 system in coordinate format");

  int sweep_iters = 20;
  int sweep_dofs = 30000;
  CLI::App* sweep = app.add_subcommand("sweep", "run the method x marking matrix");
  add_common(sweep, common);
  sweep->add_option("--max-iterations", sweep_iters, "iteration cap per run");
  sweep->add_option("--max-dofs", sweep_dofs, "dof cap per run");
  sweep->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalidConfig;
  }

  try {
    if (run->parsed()) {
      cfg.marking.strategy = marking == "ch" ? adg::MarkingStrategy::CarstensenHoppe
                                             : adg::MarkingStrategy::BeckerMaoShi;
      if (theta > 0.0) {
        cfg.marking.theta_ch = theta;
        cfg.marking.theta_bms = theta;
      }
      cfg.write_snapshots = !no_snapshots;
      if (!out_dir.empty()) cfg.out_dir = out_dir;
      return run_command(common, cfg);
    }
    if (verify->parsed()) {
      // The identity thresholds need solver headroom; tighten the default.
      if (verify->count("--rel-tol") == 0) common.rel_tol = 1e-12;
      return verify_command(common, levels, dump_matrix);
    }
    if (sweep->parsed()) return sweep_command(common, sweep_iters, sweep_dofs, out_dir);
  } catch (const adg::InadmissibleAlpha& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const adg::MeshError& e) {
    std::cerr << "mesh error: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

#include "adg/driver.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "adg/postprocess.hpp"
#include "adg/quadrature.hpp"
#include "adg/solver.hpp"

namespace adg {

namespace {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_opt(const std::optional<double>& v) {
  return v ? format_g17(*v) : "nan";
}

void write_snapshot(const Mesh& mesh, const std::filesystem::path& dir, int iteration,
                    const std::vector<double>& cell_eta) {
  char name[48];
  std::snprintf(name, sizeof name, "mesh_%03d.txt", iteration);
  std::ofstream txt(dir / name);
  write_mesh_text(mesh, txt);
  std::snprintf(name, sizeof name, "mesh_%03d.vtk", iteration);
  std::ofstream vtk(dir / name);
  write_mesh_vtk(mesh, vtk, cell_eta, "volume_indicator");
}

}  // namespace

void RunConfig::validate() const {
  auto in_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!in_unit(marking.theta_ch)) throw std::invalid_argument("theta (CH) must be in (0,1)");
  if (!in_unit(marking.theta_bms)) throw std::invalid_argument("theta (BMS) must be in (0,1)");
  if (!in_unit(marking.sigma)) throw std::invalid_argument("sigma must be in (0,1)");
  if (!in_unit(marking.sigma_osc)) throw std::invalid_argument("sigma-osc must be in (0,1)");
  if (!(marking.gamma_switch > 0.0)) throw std::invalid_argument("gamma-switch must be > 0");
  if (!(gamma_monitor > 0.0)) throw std::invalid_argument("gamma-monitor must be > 0");
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw std::invalid_argument("rel-tol must be in (0,1)");
  if (max_dofs < 3) throw std::invalid_argument("max-dofs must be >= 3");
  if (max_iterations < 1) throw std::invalid_argument("max-iterations must be >= 1");
  if (alpha && !(*alpha > 0.0)) throw std::invalid_argument("alpha must be > 0 or auto");
}

double auto_alpha(const Mesh& mesh, MethodKind method) {
  switch (method) {
    case MethodKind::IP:
      return 1.01 * min_alpha(mesh, MethodKind::IP);
    case MethodKind::LDG:
    case MethodKind::BrezziEtAl:
      return 0.01;
    case MethodKind::BassiEtAl:
      return 3.01;
  }
  return 1.0;
}

double energy_error(const DgFunction& u_h, const GradientField& exact_gradient,
                    const Mesh& mesh, int quad_degree) {
  const TriQuadRule& rule = quad_degree <= 6 ? tri_quad_degree6() : tri_quad_degree8();
  double sum = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const Point2 p0 = mesh.vertex_of(t, 0);
    const Point2 p1 = mesh.vertex_of(t, 1);
    const Point2 p2 = mesh.vertex_of(t, 2);
    const Point2 gh = dg_gradient(u_h, mesh, t);
    double local = 0.0;
    for (const TriQuadPoint& q : rule.points) {
      const Point2 diff = exact_gradient(bary_to_point(q, p0, p1, p2)) - gh;
      local += q.w * dot(diff, diff);
    }
    sum += mesh.area[static_cast<size_t>(t)] * local;
  }
  return std::sqrt(sum);
}

ConvergenceHistory adapt_loop(const RunConfig& cfg) {
  return adapt_loop(cfg, resolve_problem(cfg.problem));
}

ConvergenceHistory adapt_loop(const RunConfig& cfg, const Problem& problem) {
  cfg.validate();
  ConvergenceHistory history;
  history.energy_error_is_proxy = !problem.exact_gradient.has_value();

  if (cfg.out_dir) std::filesystem::create_directories(*cfg.out_dir);

  auto persist = [&]() {
    if (!cfg.out_dir) return;
    std::ofstream csv(*cfg.out_dir / "history.csv");
    write_history_csv(history, csv);
    std::ofstream rep(*cfg.out_dir / "report.json");
    write_report_json(history, cfg, rep);
  };

  Mesh mesh = problem.initial_mesh;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const auto t0 = std::chrono::steady_clock::now();

    const double alpha = cfg.alpha ? *cfg.alpha : auto_alpha(mesh, cfg.method);
    const SparseSymMatrix A = assemble_system(mesh, cfg.method, alpha);
    const std::vector<double> b = assemble_rhs(mesh, problem.f);
    auto [u_vec, report] = solve_spd(A, b, cfg.rel_tol, cfg.solver_max_iterations);
    if (!report.converged) {
      history.solver_failed = true;
      persist();
      return history;
    }
    const DgFunction u_h{std::move(u_vec)};

    const CrFunction u_star = average_to_cr(u_h, mesh);
    const EstimatorBreakdown est = estimate(u_star, problem.f, mesh);

    ConvergenceRecord rec;
    rec.iteration = it;
    rec.ntriangles = mesh.n_triangles();
    rec.ndof = 3 * rec.ntriangles;
    rec.eta_sq_total = est.eta_sq_total;
    rec.jump_total = est.jump_total;
    rec.volume_total = est.volume_total;
    const double diff = norm_1h(u_h - embed(u_star, mesh), mesh);
    rec.diff_norm_sq = diff * diff;
    if (problem.exact_gradient)
      rec.energy_error = energy_error(u_h, *problem.exact_gradient, mesh);
    const double err_sq =
        rec.energy_error ? (*rec.energy_error) * (*rec.energy_error) : rec.eta_sq_total;
    rec.contraction_quantity = err_sq + cfg.gamma_monitor * rec.volume_total;
    rec.alpha = alpha;

    if (!history.records.empty()) {
      const ConvergenceRecord& prev = history.records.back();
      if (prev.contraction_quantity > 0.0)
        rec.ratio = rec.contraction_quantity / prev.contraction_quantity;
      if (prev.volume_total > 0.0)
        history.rho2_obs_max =
            std::max(history.rho2_obs_max, rec.volume_total / prev.volume_total);
    }
    if (rec.volume_total > 0.0)
      history.c_star_obs = std::max(history.c_star_obs, rec.diff_norm_sq / rec.volume_total);

    rec.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    history.records.push_back(rec);

    if (cfg.out_dir && cfg.write_snapshots)
      write_snapshot(mesh, *cfg.out_dir, it, est.per_element_volume);
    if (cfg.out_dir && cfg.export_estimator) {
      char name[48];
      std::snprintf(name, sizeof name, "estimator_%03d.csv", it);
      std::ofstream out(*cfg.out_dir / name);
      write_estimator_csv(est, out);
    }

    if (rec.ndof >= cfg.max_dofs || it + 1 == cfg.max_iterations) break;

    MarkResult marks;
    if (cfg.uniform_refinement) {
      marks.marked_edges.resize(static_cast<size_t>(mesh.n_edges()));
      std::iota(marks.marked_edges.begin(), marks.marked_edges.end(), 0);
    } else {
      marks = mark(est, cfg.marking);
    }
    if (marks.marked_edges.empty() && marks.marked_triangles.empty()) break;

    mesh = refine(mesh, marks.marked_edges, marks.marked_triangles).first;
  }

  persist();
  return history;
}

std::vector<double> contraction_ratios(const ConvergenceHistory& history,
                                       double gamma_monitor) {
  if (history.records.empty())
    throw std::invalid_argument("contraction_ratios: empty history");
  std::vector<double> quantities;
  for (const ConvergenceRecord& r : history.records) {
    if (!r.energy_error) continue;  // undefined entries skipped
    quantities.push_back((*r.energy_error) * (*r.energy_error) +
                         gamma_monitor * r.volume_total);
  }
  std::vector<double> ratios;
  for (size_t k = 1; k < quantities.size(); ++k)
    ratios.push_back(quantities[k] / quantities[k - 1]);
  return ratios;
}

void write_history_csv(const ConvergenceHistory& history, std::ostream& out) {
  out << "iteration,ndof,ntriangles,energy_error,eta_sq_total,jump_total,"
         "volume_total,diff_norm_sq,contraction_quantity,ratio,alpha\n";
  for (const ConvergenceRecord& r : history.records) {
    out << r.iteration << ',' << r.ndof << ',' << r.ntriangles << ','
        << format_opt(r.energy_error) << ',' << format_g17(r.eta_sq_total) << ','
        << format_g17(r.jump_total) << ',' << format_g17(r.volume_total) << ','
        << format_g17(r.diff_norm_sq) << ',' << format_g17(r.contraction_quantity) << ','
        << format_opt(r.ratio) << ',' << format_g17(r.alpha) << '\n';
  }
}

void write_report_json(const ConvergenceHistory& history, const RunConfig& cfg,
                       std::ostream& out) {
  nlohmann::ordered_json j;
  j["problem"] = cfg.problem;
  j["method"] = method_name(cfg.method);
  j["marking"] =
      cfg.marking.strategy == MarkingStrategy::CarstensenHoppe ? "ch" : "bms";
  j["alpha"] = cfg.alpha ? nlohmann::ordered_json(*cfg.alpha)
                         : nlohmann::ordered_json("auto");
  j["gamma_monitor"] = cfg.gamma_monitor;
  j["uniform_refinement"] = cfg.uniform_refinement;
  j["iterations"] = history.records.size();
  j["solver_failed"] = history.solver_failed;
  j["contraction_uses_estimator_proxy"] = history.energy_error_is_proxy;
  if (!history.records.empty()) {
    const ConvergenceRecord& last = history.records.back();
    j["final_ndof"] = last.ndof;
    j["final_eta_sq_total"] = last.eta_sq_total;
    if (last.energy_error) j["final_energy_error"] = *last.energy_error;
  }
  j["c_star_obs"] = history.c_star_obs;
  j["rho2_obs_max"] = history.rho2_obs_max;
  double max_ratio = 0.0;
  bool have_ratio = false;
  for (const ConvergenceRecord& r : history.records) {
    if (r.iteration >= 5 && r.ratio) {
      max_ratio = std::max(max_ratio, *r.ratio);
      have_ratio = true;
    }
  }
  if (have_ratio) j["max_contraction_ratio_from_iter5"] = max_ratio;
  double wall = 0.0;
  for (const ConvergenceRecord& r : history.records) wall += r.wall_time_sec;
  j["wall_time_total_sec"] = wall;
  out << j.dump(2) << '\n';
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("log_log_slope: need >= 2 samples");
  const size_t n = x.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(n), ly(n);
  for (size_t i = 0; i < n; ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < n; ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  return num / den;
}

}  // namespace adg

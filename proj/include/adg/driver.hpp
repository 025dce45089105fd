#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "adg/estimate.hpp"
#include "adg/problems.hpp"

namespace adg {

/// One SOLVE -> ESTIMATE -> MARK -> REFINE iteration, as recorded.
struct ConvergenceRecord {
  int iteration = 0;
  int ndof = 0;  ///< DG dofs, 3 * ntriangles
  int ntriangles = 0;
  /// ||grad_h(u - u_h)||, when the exact gradient is known.
  std::optional<double> energy_error;
  double eta_sq_total = 0.0;
  double jump_total = 0.0;
  double volume_total = 0.0;  ///< ||hf||^2
  double diff_norm_sq = 0.0;  ///< ||u_h - u_h*||_{1,h}^2
  /// energy_error^2 (or eta_sq_total as a proxy when the exact solution is
  /// unknown) + gamma_monitor * volume_total.
  double contraction_quantity = 0.0;
  /// contraction_quantity / previous contraction_quantity; absent on the
  /// first record.
  std::optional<double> ratio;
  double alpha = 0.0;
  double wall_time_sec = 0.0;  ///< not written to history.csv (nondeterministic)
};

struct ConvergenceHistory {
  std::vector<ConvergenceRecord> records;
  bool solver_failed = false;
  bool energy_error_is_proxy = false;  ///< contraction quantity uses eta^2
  /// Observed constants, monitored over the run.
  double c_star_obs = 0.0;    ///< max of diff_norm_sq / volume_total
  double rho2_obs_max = 0.0;  ///< max of volume_total step ratio
};

struct RunConfig {
  MethodKind method = MethodKind::IP;
  /// Empty = "auto": IP 1.01 * min_alpha per mesh, LDG/Brezzi 0.01, Bassi 3.01.
  std::optional<double> alpha;
  MarkingConfig marking;
  std::string problem = "square-sine";
  int max_dofs = 50000;
  int max_iterations = 40;
  double rel_tol = 1e-10;
  double gamma_monitor = 10.0;
  std::optional<std::filesystem::path> out_dir;
  bool uniform_refinement = false;
  int solver_max_iterations = -1;  ///< < 0: 10 * dimension
  bool write_snapshots = true;     ///< per-iteration mesh text + VTK in out_dir
  bool export_estimator = false;   ///< per-iteration estimator CSV in out_dir

  void validate() const;  ///< throws std::invalid_argument on bad ranges
};

double auto_alpha(const Mesh& mesh, MethodKind method);

/// Runs the adaptive loop on cfg.problem. One record per iteration; stops at
/// max_dofs, max_iterations, or when nothing is marked. On solver failure the
/// partial history is persisted (if out_dir is set) and solver_failed is set.
ConvergenceHistory adapt_loop(const RunConfig& cfg);
ConvergenceHistory adapt_loop(const RunConfig& cfg, const Problem& problem);

/// ||grad u - grad u_h|| via the degree-6 rule (grad u_h constant per element).
double energy_error(const DgFunction& u_h, const GradientField& exact_gradient,
                    const Mesh& mesh, int quad_degree = 6);

/// ratio_k = (e_k^2 + gamma v_k) / (e_{k-1}^2 + gamma v_{k-1}) over records
/// with energy_error present; undefined entries are skipped.
std::vector<double> contraction_ratios(const ConvergenceHistory& history,
                                       double gamma_monitor);

/// history.csv column order:
/// iteration,ndof,ntriangles,energy_error,eta_sq_total,jump_total,
/// volume_total,diff_norm_sq,contraction_quantity,ratio,alpha
void write_history_csv(const ConvergenceHistory& history, std::ostream& out);

/// Observed-constants summary (JSON).
void write_report_json(const ConvergenceHistory& history, const RunConfig& cfg,
                       std::ostream& out);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace adg

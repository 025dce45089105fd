#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "adg/assembly.hpp"
#include "adg/dg_space.hpp"

namespace adg {

/// Residual estimator parts. The edge part integrates the squared jump of
/// the tangential derivative of u_h*, the volume part is the data
/// oscillation h_T^2 ||f||_T^2.
struct EstimatorBreakdown {
  /// eta_e^2 = integral_e h_e [[du_h*/ds]]^2 ds = h_e^2 (slope jump)^2;
  /// one entry per edge, zero on boundary edges.
  std::vector<double> per_edge_jump;
  /// h_T^2 ||f||_{L2(T)}^2 per triangle (degree-4 rule).
  std::vector<double> per_element_volume;
  double jump_total = 0.0;
  double volume_total = 0.0;
  double eta_sq_total = 0.0;
};

EstimatorBreakdown estimate(const CrFunction& u_h_star, const ScalarField& f,
                            const Mesh& mesh);

/// CSV export: "kind,id,indicator" with kind in {edge, element}.
void write_estimator_csv(const EstimatorBreakdown& est, std::ostream& out);

/// Greedy bulk selection: the minimal-cardinality index set S with
/// sum_S >= fraction * sum_all, built in descending indicator order, ties
/// broken by lower index. All-zero indicators yield an empty set.
std::vector<int> dorfler_select(std::span<const double> indicators, double fraction);

enum class MarkingStrategy { CarstensenHoppe, BeckerMaoShi };

struct MarkingConfig {
  MarkingStrategy strategy = MarkingStrategy::CarstensenHoppe;
  double theta_ch = 0.5;     ///< bulk fraction for the CH edge marking
  double theta_bms = 0.5;    ///< bulk fraction for the BMS jump branch
  double sigma = 0.3;        ///< bulk fraction for the BMS volume branch
  double gamma_switch = 1.0; ///< BMS branch test: volume <= gamma * jump
  double sigma_osc = 0.3;    ///< supplementary CH volume marking fraction
};

enum class MarkBranch { Jump, Volume };

struct MarkResult {
  std::vector<int> marked_edges;
  std::vector<int> marked_triangles;
  std::optional<MarkBranch> branch;  ///< set by the BMS strategy only
};

/// Carstensen-Hoppe marking: bulk selection on the edge-jump indicators,
/// plus a supplementary volume pass (fraction sigma_osc) so that the data
/// oscillation contracts under refinement.
MarkResult mark_ch(const EstimatorBreakdown& est, const MarkingConfig& cfg);

/// Becker-Mao-Shi marking: the jump branch if
/// volume_total <= gamma_switch * jump_total, the volume branch otherwise.
MarkResult mark_bms(const EstimatorBreakdown& est, const MarkingConfig& cfg);

MarkResult mark(const EstimatorBreakdown& est, const MarkingConfig& cfg);

}  // namespace adg

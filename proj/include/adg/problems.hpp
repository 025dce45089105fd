#pragma once

#include <functional>
#include <optional>
#include <string>

#include "adg/assembly.hpp"
#include "adg/mesh.hpp"

namespace adg {

using GradientField = std::function<Point2(Point2)>;

/// Poisson model problem with homogeneous Dirichlet data.
struct Problem {
  std::string name;
  std::string description;
  Mesh initial_mesh;
  ScalarField f;
  /// Exact solution gradient, when known; enables true energy errors.
  std::optional<GradientField> exact_gradient;
};

/// Unit square, u = sin(pi x) sin(pi y), f = 2 pi^2 sin(pi x) sin(pi y).
/// Initial mesh: two triangles split by the (0,0)-(1,1) diagonal.
Problem make_square_sine();

/// L-shaped domain (-1,1)^2 minus the quadrant [0,1) x (-1,0), f = 1.
/// Re-entrant corner at the origin; no exact gradient, estimator-monitored.
/// Initial mesh: six triangles fanned around the origin.
Problem make_lshape_const();

/// "square-sine", "lshape-const", or a path to a node/element mesh file
/// (then f = 1, no exact gradient). Throws std::invalid_argument otherwise.
Problem resolve_problem(const std::string& name_or_path);

}  // namespace adg

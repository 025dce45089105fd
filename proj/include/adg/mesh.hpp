#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adg/geometry.hpp"

namespace adg {

/// Thrown by build_mesh on non-conforming or degenerate input.
struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Triangle {
  /// Vertex indices in counterclockwise order. Local edge k is the edge
  /// opposite vertex k, i.e. (v[(k+1)%3], v[(k+2)%3]).
  std::array<int, 3> v{-1, -1, -1};
  /// Local index of the edge bisected next (newest-vertex bisection).
  int refinement_edge = 0;
  /// Number of bisections separating this triangle from the initial mesh.
  int generation = 0;
  /// Index of the triangle in the parent mesh this one came from.
  std::optional<int> parent;
};

struct Edge {
  std::array<int, 2> v{-1, -1};
  int t_minus = -1;
  std::optional<int> t_plus;  ///< absent <=> boundary edge
  /// Unit normal, equal to the outer normal of t_minus (points into t_plus).
  Point2 normal;
  double length = 0.0;
  Point2 midpoint;

  bool is_boundary() const { return !t_plus.has_value(); }
};

/// Conforming triangulation with full edge/triangle adjacency.
///
/// Immutable after construction: refine() returns a new mesh. All derived
/// quantities (normals, areas, barycentric gradients, element diameters)
/// are precomputed so queries are plain array reads.
struct Mesh {
  std::vector<Point2> vertices;
  std::vector<Triangle> triangles;
  std::vector<Edge> edges;
  /// Per triangle, global edge index of local edge k (opposite vertex k).
  std::vector<std::array<int, 3>> edge_of_triangle;

  // Derived per-triangle data, filled at construction.
  std::vector<double> area;                        ///< |T| > 0
  std::vector<std::array<Point2, 3>> grad_lambda;  ///< barycentric gradients
  std::vector<double> h;                           ///< longest edge of T

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int n_interior_edges() const;
  int n_boundary_edges() const { return n_edges() - n_interior_edges(); }

  Point2 vertex_of(int t, int local) const {
    return vertices[static_cast<size_t>(triangles[static_cast<size_t>(t)].v[static_cast<size_t>(local)])];
  }

  /// Local index (0..2) of global vertex `v` within triangle `t`.
  int local_vertex_index(int t, int v) const;

  double total_area() const;
  double min_angle() const;  ///< smallest interior angle over all triangles
};

/// Builds all adjacency from vertex coordinates and CCW-or-CW vertex triples.
/// Triangles given clockwise are flipped. The refinement edge of every
/// triangle is initialized to its longest edge (ties broken by lowest global
/// edge index). Throws MeshError on degenerate triangles, duplicate or
/// over-shared edges, and hanging vertices.
Mesh build_mesh(const std::vector<Point2>& vertices,
                const std::vector<std::array<int, 3>>& triangle_vertex_ids);

struct RefinementMap {
  /// Per child triangle, the index of its ancestor in the parent mesh
  /// (identity for triangles that were not touched).
  std::vector<int> child_to_parent;
  /// Parent edge indices that received a midpoint, in ascending order.
  std::vector<int> bisected_edges;
};

/// Newest-vertex bisection. Every marked edge is bisected; every marked
/// triangle has its refinement edge bisected; the closure adds whatever
/// further refinement edges are needed so that the result is conforming.
std::pair<Mesh, RefinementMap> refine(const Mesh& mesh,
                                      const std::vector<int>& marked_edges,
                                      const std::vector<int>& marked_triangles = {});

/// Recomputes adjacency from scratch and checks every Mesh invariant
/// (conformity, normals, areas, edge bookkeeping). Throws MeshError on
/// violation. Test and debugging aid.
void validate_mesh(const Mesh& mesh);

// Plain-text node/element format: "NV NT" then NV lines "x y" then NT lines
// "v0 v1 v2" (0-based).
Mesh read_mesh_text(std::istream& in);
void write_mesh_text(const Mesh& mesh, std::ostream& out);

/// Legacy-VTK unstructured grid, for visualization.
void write_mesh_vtk(const Mesh& mesh, std::ostream& out,
                    const std::vector<double>& cell_data = {},
                    const std::string& cell_data_name = "value");

}  // namespace adg

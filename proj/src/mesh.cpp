#include "adg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <utility>

namespace adg {

namespace {

struct RawTriangle {
  std::array<int, 3> v;
  int refinement_edge;  // -1: initialize from the longest edge
  int generation;
  std::optional<int> parent;
};

/// Shared mesh builder. `validate_input` enables the O(NV * NE) hanging-node
/// scan used for external input; meshes produced by refine() are conforming
/// by construction and skip it.
Mesh build_internal(std::vector<Point2> vertices, std::vector<RawTriangle> tris,
                    bool validate_input) {
  Mesh mesh;
  mesh.vertices = std::move(vertices);
  const int nv = mesh.n_vertices();
  const int nt = static_cast<int>(tris.size());

  for (auto& p : mesh.vertices) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw MeshError("build_mesh: non-finite vertex coordinate");
  }

  mesh.triangles.resize(static_cast<size_t>(nt));
  for (int t = 0; t < nt; ++t) {
    RawTriangle& raw = tris[static_cast<size_t>(t)];
    for (int k = 0; k < 3; ++k) {
      if (raw.v[static_cast<size_t>(k)] < 0 || raw.v[static_cast<size_t>(k)] >= nv)
        throw MeshError("build_mesh: vertex index out of range");
    }
    if (raw.v[0] == raw.v[1] || raw.v[1] == raw.v[2] || raw.v[0] == raw.v[2])
      throw MeshError("build_mesh: triangle with repeated vertex");

    const Point2 p0 = mesh.vertices[static_cast<size_t>(raw.v[0])];
    const Point2 p1 = mesh.vertices[static_cast<size_t>(raw.v[1])];
    const Point2 p2 = mesh.vertices[static_cast<size_t>(raw.v[2])];
    double a = signed_area(p0, p1, p2);
    if (a < 0.0) {
      std::swap(raw.v[1], raw.v[2]);
      // Local edge k is opposite vertex k; swapping vertices 1 and 2 swaps
      // the labels of local edges 1 and 2.
      if (raw.refinement_edge == 1)
        raw.refinement_edge = 2;
      else if (raw.refinement_edge == 2)
        raw.refinement_edge = 1;
      a = -a;
    }
    if (a == 0.0) throw MeshError("build_mesh: zero-area triangle");

    Triangle& tri = mesh.triangles[static_cast<size_t>(t)];
    tri.v = raw.v;
    tri.refinement_edge = raw.refinement_edge;
    tri.generation = raw.generation;
    tri.parent = raw.parent;
  }

  // Edge table. Scanning triangles in ascending order makes t_minus the
  // lower-indexed triangle and fixes edge orientation deterministically.
  std::map<std::pair<int, int>, int> edge_ids;
  mesh.edge_of_triangle.assign(static_cast<size_t>(nt), {-1, -1, -1});
  for (int t = 0; t < nt; ++t) {
    const Triangle& tri = mesh.triangles[static_cast<size_t>(t)];
    for (int k = 0; k < 3; ++k) {
      const int a = tri.v[static_cast<size_t>((k + 1) % 3)];
      const int b = tri.v[static_cast<size_t>((k + 2) % 3)];
      const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      auto it = edge_ids.find(key);
      if (it == edge_ids.end()) {
        Edge e;
        e.v = {a, b};
        e.t_minus = t;
        const Point2 pa = mesh.vertices[static_cast<size_t>(a)];
        const Point2 pb = mesh.vertices[static_cast<size_t>(b)];
        const Point2 d = pb - pa;
        e.length = norm(d);
        // Rotating the CCW edge direction clockwise gives the outer normal.
        e.normal = (1.0 / e.length) * Point2{d.y, -d.x};
        e.midpoint = midpoint(pa, pb);
        const int id = mesh.n_edges();
        mesh.edges.push_back(e);
        edge_ids.emplace(key, id);
        mesh.edge_of_triangle[static_cast<size_t>(t)][static_cast<size_t>(k)] = id;
      } else {
        Edge& e = mesh.edges[static_cast<size_t>(it->second)];
        if (e.t_plus.has_value())
          throw MeshError("build_mesh: edge shared by more than two triangles");
        e.t_plus = t;
        mesh.edge_of_triangle[static_cast<size_t>(t)][static_cast<size_t>(k)] = it->second;
      }
    }
  }

  if (validate_input) {
    // Hanging-node scan: no vertex may lie strictly inside an edge. Input
    // meshes are macro-triangulations, so the quadratic cost is acceptable;
    // gate it for very large external files.
    if (static_cast<long long>(nv) * mesh.n_edges() <= 20'000'000LL) {
      for (const Edge& e : mesh.edges) {
        const Point2 pa = mesh.vertices[static_cast<size_t>(e.v[0])];
        const Point2 pb = mesh.vertices[static_cast<size_t>(e.v[1])];
        const Point2 d = pb - pa;
        const double len2 = dot(d, d);
        for (int v = 0; v < nv; ++v) {
          if (v == e.v[0] || v == e.v[1]) continue;
          const Point2 r = mesh.vertices[static_cast<size_t>(v)] - pa;
          const double along = dot(r, d);
          if (along <= 0.0 || along >= len2) continue;
          const double offset = std::abs(cross(d, r));
          if (offset <= 1e-12 * len2)
            throw MeshError("build_mesh: hanging vertex detected on an edge");
        }
      }
    }
  }

  // Derived per-triangle data.
  mesh.area.resize(static_cast<size_t>(nt));
  mesh.grad_lambda.resize(static_cast<size_t>(nt));
  mesh.h.resize(static_cast<size_t>(nt));
  for (int t = 0; t < nt; ++t) {
    const Point2 p0 = mesh.vertex_of(t, 0);
    const Point2 p1 = mesh.vertex_of(t, 1);
    const Point2 p2 = mesh.vertex_of(t, 2);
    const double a = signed_area(p0, p1, p2);
    mesh.area[static_cast<size_t>(t)] = a;
    const std::array<Point2, 3> p{p0, p1, p2};
    for (int k = 0; k < 3; ++k) {
      const Point2 d = p[static_cast<size_t>((k + 2) % 3)] - p[static_cast<size_t>((k + 1) % 3)];
      mesh.grad_lambda[static_cast<size_t>(t)][static_cast<size_t>(k)] =
          (1.0 / (2.0 * a)) * Point2{-d.y, d.x};
    }
    double hmax = 0.0;
    for (int k = 0; k < 3; ++k)
      hmax = std::max(hmax, mesh.edges[static_cast<size_t>(mesh.edge_of_triangle[static_cast<size_t>(t)][static_cast<size_t>(k)])].length);
    mesh.h[static_cast<size_t>(t)] = hmax;
  }

  // Longest-edge initialization of refinement edges where requested,
  // ties broken by the lowest global edge index.
  for (int t = 0; t < nt; ++t) {
    Triangle& tri = mesh.triangles[static_cast<size_t>(t)];
    if (tri.refinement_edge >= 0) continue;
    int best = 0;
    for (int k = 1; k < 3; ++k) {
      const int ek = mesh.edge_of_triangle[static_cast<size_t>(t)][static_cast<size_t>(k)];
      const int eb = mesh.edge_of_triangle[static_cast<size_t>(t)][static_cast<size_t>(best)];
      const double lk = mesh.edges[static_cast<size_t>(ek)].length;
      const double lb = mesh.edges[static_cast<size_t>(eb)].length;
      if (lk > lb || (lk == lb && ek < eb)) best = k;
    }
    tri.refinement_edge = best;
  }

  return mesh;
}

}  // namespace

int Mesh::n_interior_edges() const {
  int n = 0;
  for (const Edge& e : edges)
    if (!e.is_boundary()) ++n;
  return n;
}

int Mesh::local_vertex_index(int t, int v) const {
  const Triangle& tri = triangles[static_cast<size_t>(t)];
  for (int k = 0; k < 3; ++k)
    if (tri.v[static_cast<size_t>(k)] == v) return k;
  throw MeshError("local_vertex_index: vertex not in triangle");
}

double Mesh::total_area() const {
  double a = 0.0;
  for (double t : area) a += t;
  return a;
}

double Mesh::min_angle() const {
  double amin = std::numeric_limits<double>::infinity();
  for (int t = 0; t < n_triangles(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const Point2 c = vertex_of(t, k);
      const Point2 u = vertex_of(t, (k + 1) % 3) - c;
      const Point2 w = vertex_of(t, (k + 2) % 3) - c;
      amin = std::min(amin, std::atan2(std::abs(cross(u, w)), dot(u, w)));
    }
  }
  return amin;
}

Mesh build_mesh(const std::vector<Point2>& vertices,
                const std::vector<std::array<int, 3>>& triangle_vertex_ids) {
  std::vector<RawTriangle> raw;
  raw.reserve(triangle_vertex_ids.size());
  for (const auto& tv : triangle_vertex_ids)
    raw.push_back({tv, -1, 0, std::nullopt});
  return build_internal(vertices, std::move(raw), true);
}

std::pair<Mesh, RefinementMap> refine(const Mesh& mesh,
                                      const std::vector<int>& marked_edges,
                                      const std::vector<int>& marked_triangles) {
  const int nt = mesh.n_triangles();
  const int ne = mesh.n_edges();

  std::vector<char> to_bisect(static_cast<size_t>(ne), 0);
  for (int e : marked_edges) {
    if (e < 0 || e >= ne) throw MeshError("refine: edge index out of range");
    to_bisect[static_cast<size_t>(e)] = 1;
  }
  // Marked triangles are realized as "bisect the refinement edge".
  for (int t : marked_triangles) {
    if (t < 0 || t >= nt) throw MeshError("refine: triangle index out of range");
    const int re = mesh.edge_of_triangle[static_cast<size_t>(t)]
                                        [static_cast<size_t>(mesh.triangles[static_cast<size_t>(t)].refinement_edge)];
    to_bisect[static_cast<size_t>(re)] = 1;
  }

  // Closure: whenever any edge of a triangle is bisected, its refinement
  // edge must be bisected too. The set only grows, so this terminates; the
  // fixpoint makes the one-pass bisection below conforming.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int t = 0; t < nt; ++t) {
      const auto& eot = mesh.edge_of_triangle[static_cast<size_t>(t)];
      const int re = eot[static_cast<size_t>(mesh.triangles[static_cast<size_t>(t)].refinement_edge)];
      if (to_bisect[static_cast<size_t>(re)]) continue;
      if (to_bisect[static_cast<size_t>(eot[0])] || to_bisect[static_cast<size_t>(eot[1])] ||
          to_bisect[static_cast<size_t>(eot[2])]) {
        to_bisect[static_cast<size_t>(re)] = 1;
        changed = true;
      }
    }
  }

  RefinementMap map;
  for (int e = 0; e < ne; ++e)
    if (to_bisect[static_cast<size_t>(e)]) map.bisected_edges.push_back(e);

  if (map.bisected_edges.empty()) {
    Mesh copy = mesh;
    map.child_to_parent.resize(static_cast<size_t>(nt));
    for (int t = 0; t < nt; ++t) {
      map.child_to_parent[static_cast<size_t>(t)] = t;
      copy.triangles[static_cast<size_t>(t)].parent = t;
    }
    return {std::move(copy), std::move(map)};
  }

  std::vector<Point2> new_vertices = mesh.vertices;
  std::vector<int> midpoint_vertex(static_cast<size_t>(ne), -1);
  for (int e : map.bisected_edges) {
    midpoint_vertex[static_cast<size_t>(e)] = static_cast<int>(new_vertices.size());
    new_vertices.push_back(mesh.edges[static_cast<size_t>(e)].midpoint);
  }

  std::vector<RawTriangle> out;
  out.reserve(static_cast<size_t>(nt) * 2);

  // Bisects (v0,v1,v2) at its refinement edge while that edge is an original
  // mesh edge in the bisection set. old_edge[k] is the original global edge
  // under local edge k, or -1 for edges created by bisection; children's
  // refinement edges are the parent's two other edges, so the recursion
  // stops after at most two levels.
  auto emit = [&](auto&& self, std::array<int, 3> v, int ref_local,
                  std::array<int, 3> old_edge, int generation, int parent) -> void {
    const int ref_global = old_edge[static_cast<size_t>(ref_local)];
    if (ref_global < 0 || !to_bisect[static_cast<size_t>(ref_global)]) {
      out.push_back({v, ref_local, generation, parent});
      return;
    }
    const int p = v[static_cast<size_t>(ref_local)];
    const int a = v[static_cast<size_t>((ref_local + 1) % 3)];
    const int b = v[static_cast<size_t>((ref_local + 2) % 3)];
    const int ea = old_edge[static_cast<size_t>((ref_local + 1) % 3)];  // edge (b,p)
    const int eb = old_edge[static_cast<size_t>((ref_local + 2) % 3)];  // edge (p,a)
    const int m = midpoint_vertex[static_cast<size_t>(ref_global)];
    self(self, {a, m, p}, 1, {-1, eb, -1}, generation + 1, parent);
    self(self, {m, b, p}, 0, {ea, -1, -1}, generation + 1, parent);
  };

  for (int t = 0; t < nt; ++t) {
    const Triangle& tri = mesh.triangles[static_cast<size_t>(t)];
    emit(emit, tri.v, tri.refinement_edge, mesh.edge_of_triangle[static_cast<size_t>(t)],
         tri.generation, t);
  }

  map.child_to_parent.reserve(out.size());
  for (const RawTriangle& rt : out) map.child_to_parent.push_back(*rt.parent);

  Mesh refined = build_internal(std::move(new_vertices), std::move(out), false);
  return {std::move(refined), std::move(map)};
}

void validate_mesh(const Mesh& mesh) {
  const int nt = mesh.n_triangles();
  const int ne = mesh.n_edges();
  if (static_cast<int>(mesh.edge_of_triangle.size()) != nt ||
      static_cast<int>(mesh.area.size()) != nt ||
      static_cast<int>(mesh.grad_lambda.size()) != nt ||
      static_cast<int>(mesh.h.size()) != nt)
    throw MeshError("validate: inconsistent array sizes");

  std::map<std::pair<int, int>, std::vector<int>> incident;
  for (int t = 0; t < nt; ++t) {
    const Triangle& tri = mesh.triangles[static_cast<size_t>(t)];
    const double a = signed_area(mesh.vertex_of(t, 0), mesh.vertex_of(t, 1), mesh.vertex_of(t, 2));
    if (!(a > 0.0)) throw MeshError("validate: non-positive triangle area");
    if (std::abs(a - mesh.area[static_cast<size_t>(t)]) > 1e-14 * std::abs(a) + 1e-300)
      throw MeshError("validate: cached area mismatch");
    if (tri.refinement_edge < 0 || tri.refinement_edge > 2)
      throw MeshError("validate: refinement edge out of range");
    for (int k = 0; k < 3; ++k) {
      const int va = tri.v[static_cast<size_t>((k + 1) % 3)];
      const int vb = tri.v[static_cast<size_t>((k + 2) % 3)];
      incident[{std::min(va, vb), std::max(va, vb)}].push_back(t);
      const int e = mesh.edge_of_triangle[static_cast<size_t>(t)][static_cast<size_t>(k)];
      if (e < 0 || e >= ne) throw MeshError("validate: edge index out of range");
      const Edge& edge = mesh.edges[static_cast<size_t>(e)];
      if (std::min(edge.v[0], edge.v[1]) != std::min(va, vb) ||
          std::max(edge.v[0], edge.v[1]) != std::max(va, vb))
        throw MeshError("validate: edge_of_triangle does not match vertices");
    }
  }

  if (static_cast<int>(incident.size()) != ne)
    throw MeshError("validate: edge count does not match adjacency rebuild");

  for (int e = 0; e < ne; ++e) {
    const Edge& edge = mesh.edges[static_cast<size_t>(e)];
    auto it = incident.find({std::min(edge.v[0], edge.v[1]), std::max(edge.v[0], edge.v[1])});
    if (it == incident.end()) throw MeshError("validate: stored edge not found in rebuild");
    const std::vector<int>& tris = it->second;
    if (tris.size() > 2) throw MeshError("validate: edge shared by more than two triangles");
    const bool boundary = tris.size() == 1;
    if (boundary != edge.is_boundary()) throw MeshError("validate: boundary flag mismatch");
    if (edge.t_minus != tris.front()) throw MeshError("validate: t_minus mismatch");
    if (!boundary && *edge.t_plus != tris.back()) throw MeshError("validate: t_plus mismatch");
    if (!boundary && edge.t_minus >= *edge.t_plus)
      throw MeshError("validate: t_minus must be the lower triangle index");

    const Point2 pa = mesh.vertices[static_cast<size_t>(edge.v[0])];
    const Point2 pb = mesh.vertices[static_cast<size_t>(edge.v[1])];
    if (std::abs(norm(edge.normal) - 1.0) > 1e-14)
      throw MeshError("validate: edge normal not unit");
    if (std::abs(edge.length - norm(pb - pa)) > 1e-14 * edge.length)
      throw MeshError("validate: edge length mismatch");
    // Outer normal of t_minus: points away from the opposite vertex.
    const Triangle& tm = mesh.triangles[static_cast<size_t>(edge.t_minus)];
    int opp = -1;
    for (int k = 0; k < 3; ++k) {
      const int v = tm.v[static_cast<size_t>(k)];
      if (v != edge.v[0] && v != edge.v[1]) opp = v;
    }
    const Point2 away = edge.midpoint - mesh.vertices[static_cast<size_t>(opp)];
    if (dot(away, edge.normal) <= 0.0)
      throw MeshError("validate: normal does not point out of t_minus");
  }
}

}  // namespace adg

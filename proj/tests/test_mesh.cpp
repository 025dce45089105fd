#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "adg/mesh.hpp"

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

int global_refinement_edge(const Mesh& m, int t) {
  return m.edge_of_triangle[static_cast<size_t>(t)]
                           [static_cast<size_t>(m.triangles[static_cast<size_t>(t)].refinement_edge)];
}

// Independent replay of newest-vertex bisection by the classic recursion:
// to bisect an edge, first bisect every incident triangle whose refinement
// edge differs, then split compatibly. Used as the oracle for refine().
struct NvbOracle {
  using VPair = std::pair<int, int>;

  std::vector<Point2> verts;
  struct Tri {
    std::array<int, 3> v;
    VPair ref;
    bool dead = false;
  };
  std::vector<Tri> tris;
  std::map<VPair, int> midpoint_of;

  static VPair ordered(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

  explicit NvbOracle(const Mesh& m) {
    verts = m.vertices;
    for (int t = 0; t < m.n_triangles(); ++t) {
      const Triangle& tri = m.triangles[static_cast<size_t>(t)];
      const int r = tri.refinement_edge;
      tris.push_back({tri.v,
                      ordered(tri.v[static_cast<size_t>((r + 1) % 3)],
                              tri.v[static_cast<size_t>((r + 2) % 3)]),
                      false});
    }
  }

  int find_with_edge(VPair e, int exclude = -1) const {
    for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
      if (tris[static_cast<size_t>(t)].dead || t == exclude) continue;
      const auto& v = tris[static_cast<size_t>(t)].v;
      for (int k = 0; k < 3; ++k)
        if (ordered(v[static_cast<size_t>(k)], v[static_cast<size_t>((k + 1) % 3)]) == e)
          return t;
    }
    return -1;
  }

  int midpoint(VPair e) {
    auto it = midpoint_of.find(e);
    if (it != midpoint_of.end()) return it->second;
    const int id = static_cast<int>(verts.size());
    verts.push_back(adg::midpoint(verts[static_cast<size_t>(e.first)],
                                  verts[static_cast<size_t>(e.second)]));
    midpoint_of.emplace(e, id);
    return id;
  }

  // Splits triangle t at its refinement edge (must equal e).
  void split(int t, VPair e) {
    Tri& tri = tris[static_cast<size_t>(t)];
    REQUIRE(tri.ref == e);
    int peak = -1;
    for (int k = 0; k < 3; ++k) {
      const int v = tri.v[static_cast<size_t>(k)];
      if (v != e.first && v != e.second) peak = k;
    }
    const int p = tri.v[static_cast<size_t>(peak)];
    const int a = tri.v[static_cast<size_t>((peak + 1) % 3)];
    const int b = tri.v[static_cast<size_t>((peak + 2) % 3)];
    const int m = midpoint(e);
    tri.dead = true;
    tris.push_back({{a, m, p}, ordered(p, a), false});
    tris.push_back({{m, b, p}, ordered(b, p), false});
  }

  void bisect_edge(VPair e, int depth = 0) {
    REQUIRE(depth < 64);  // NVB recursion is finite
    while (true) {
      const int t = find_with_edge(e);
      if (t < 0) return;
      if (tris[static_cast<size_t>(t)].ref != e) {
        bisect_edge(tris[static_cast<size_t>(t)].ref, depth + 1);
        continue;  // t was replaced; re-find
      }
      const int n = find_with_edge(e, t);
      if (n >= 0 && tris[static_cast<size_t>(n)].ref != e) {
        bisect_edge(tris[static_cast<size_t>(n)].ref, depth + 1);
        continue;
      }
      split(t, e);
      if (n >= 0) split(n, e);
    }
  }

  int live_count() const {
    int n = 0;
    for (const Tri& t : tris)
      if (!t.dead) ++n;
    return n;
  }
};

}  // namespace

TEST_CASE("two-triangle unit square: counts forced by topology") {
  const Mesh m = two_triangle_square();
  CHECK(m.n_vertices() == 4);
  CHECK(m.n_triangles() == 2);
  CHECK(m.n_edges() == 5);
  CHECK(m.n_interior_edges() == 1);
  CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-14));
  validate_mesh(m);

  // The diagonal is the longest edge of both triangles.
  for (int t = 0; t < 2; ++t) {
    const int e = global_refinement_edge(m, t);
    CHECK(m.edges[static_cast<size_t>(e)].length == doctest::Approx(std::sqrt(2.0)));
    CHECK_FALSE(m.edges[static_cast<size_t>(e)].is_boundary());
  }
}

TEST_CASE("single triangle: all edges on the boundary") {
  const Mesh m = build_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  CHECK(m.n_edges() == 3);
  CHECK(m.n_interior_edges() == 0);
  validate_mesh(m);
}

TEST_CASE("L-shape macro-triangulation counts") {
  const Mesh m = lshape_macro();
  CHECK(m.n_vertices() == 8);
  CHECK(m.n_triangles() == 6);
  CHECK(m.n_edges() == 13);
  // Euler: 3*6 = 2 E_i + E_b with E_i + E_b = 13 forces 5 interior edges.
  CHECK(m.n_interior_edges() == 5);
  CHECK(m.n_boundary_edges() == 8);
  CHECK(m.total_area() == doctest::Approx(3.0).epsilon(1e-14));
  validate_mesh(m);
}

TEST_CASE("clockwise input is reoriented") {
  const Mesh m = build_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 2, 1}});
  CHECK(m.area[0] == doctest::Approx(0.5));
  validate_mesh(m);
}

TEST_CASE("edge normals point from t_minus to t_plus") {
  const Mesh m = two_triangle_square();
  for (const Edge& e : m.edges) {
    CHECK(norm(e.normal) == doctest::Approx(1.0).epsilon(1e-14));
    if (!e.is_boundary()) CHECK(e.t_minus < *e.t_plus);
  }
}

TEST_CASE("degenerate and non-conforming input is rejected") {
  CHECK_THROWS_AS(build_mesh({{0, 0}, {1, 0}, {2, 0}}, {{0, 1, 2}}), MeshError);
  CHECK_THROWS_AS(build_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 1}}), MeshError);
  CHECK_THROWS_AS(build_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 3}}), MeshError);

  // Edge (0,2) shared by three triangles.
  CHECK_THROWS_AS(build_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {2, 2}},
                             {{0, 1, 2}, {0, 2, 3}, {0, 2, 4}}),
                  MeshError);

  // Vertex 4 hangs on the edge (0,0)-(1,0) of the first triangle.
  CHECK_THROWS_AS(build_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0}, {0.5, -1}},
                             {{0, 1, 2}, {0, 2, 3}, {0, 4, 5}}),
                  MeshError);
}

TEST_CASE("refine: marking the diagonal bisects both triangles") {
  const Mesh m = two_triangle_square();
  const int diag = global_refinement_edge(m, 0);
  const auto [refined, map] = refine(m, {diag});
  CHECK(refined.n_triangles() == 4);
  CHECK(refined.n_vertices() == 5);
  CHECK(refined.n_edges() == 8);  // 4 boundary + 2 diagonal halves + 2 cuts
  CHECK(map.bisected_edges == std::vector<int>{diag});
  validate_mesh(refined);

  CHECK(refined.total_area() == doctest::Approx(m.total_area()).epsilon(1e-14));
  // Children partition their parent's area.
  std::vector<double> child_area(static_cast<size_t>(m.n_triangles()), 0.0);
  for (int t = 0; t < refined.n_triangles(); ++t) {
    const int p = map.child_to_parent[static_cast<size_t>(t)];
    child_area[static_cast<size_t>(p)] += refined.area[static_cast<size_t>(t)];
    CHECK(refined.triangles[static_cast<size_t>(t)].generation == 1);
  }
  for (int p = 0; p < m.n_triangles(); ++p)
    CHECK(child_area[static_cast<size_t>(p)] ==
          doctest::Approx(m.area[static_cast<size_t>(p)]).epsilon(1e-12));
}

TEST_CASE("refine with no marks is the identity") {
  const Mesh m = lshape_macro();
  const auto [same, map] = refine(m, {});
  CHECK(same.n_triangles() == m.n_triangles());
  CHECK(same.n_edges() == m.n_edges());
  CHECK(map.bisected_edges.empty());
  for (int t = 0; t < m.n_triangles(); ++t)
    CHECK(map.child_to_parent[static_cast<size_t>(t)] == t);
}

TEST_CASE("refine: closure cascade matches the recursive NVB oracle") {
  const Mesh m = two_triangle_square();
  // A boundary edge that is not a refinement edge of its triangle.
  int mark = -1;
  for (int e = 0; e < m.n_edges(); ++e) {
    if (!m.edges[static_cast<size_t>(e)].is_boundary()) continue;
    if (e != global_refinement_edge(m, m.edges[static_cast<size_t>(e)].t_minus)) {
      mark = e;
      break;
    }
  }
  REQUIRE(mark >= 0);

  NvbOracle oracle(m);
  oracle.bisect_edge(NvbOracle::ordered(m.edges[static_cast<size_t>(mark)].v[0],
                                        m.edges[static_cast<size_t>(mark)].v[1]));

  const auto [refined, map] = refine(m, {mark});
  validate_mesh(refined);
  CHECK(refined.n_triangles() == oracle.live_count());
  CHECK(map.bisected_edges.size() == oracle.midpoint_of.size());
  CHECK(std::find(map.bisected_edges.begin(), map.bisected_edges.end(), mark) !=
        map.bisected_edges.end());
}

TEST_CASE("refine: random marking agrees with the oracle on both problems") {
  std::mt19937 rng(7);
  for (Mesh m : {two_triangle_square(), lshape_macro()}) {
    for (int round = 0; round < 4; ++round) {
      std::uniform_int_distribution<int> pick(0, m.n_edges() - 1);
      std::vector<int> marks = {pick(rng), pick(rng)};

      NvbOracle oracle(m);
      for (int e : marks)
        oracle.bisect_edge(NvbOracle::ordered(m.edges[static_cast<size_t>(e)].v[0],
                                              m.edges[static_cast<size_t>(e)].v[1]));

      auto [refined, map] = refine(m, marks);
      validate_mesh(refined);
      CHECK(refined.n_triangles() == oracle.live_count());
      CHECK(map.bisected_edges.size() == oracle.midpoint_of.size());
      m = std::move(refined);
    }
  }
}

TEST_CASE("marked triangles are bisected at least once") {
  const Mesh m = lshape_macro();
  const auto [refined, map] = refine(m, {}, {2, 4});
  validate_mesh(refined);
  int children_of_2 = 0, children_of_4 = 0;
  for (int p : map.child_to_parent) {
    children_of_2 += (p == 2);
    children_of_4 += (p == 4);
  }
  CHECK(children_of_2 >= 2);
  CHECK(children_of_4 >= 2);
  CHECK(refined.n_triangles() > m.n_triangles());  // monotone growth
}

TEST_CASE("shape regularity: descendants stay within the generation 0-2 bound") {
  // Collect the similarity classes of the first two bisection levels by
  // direct shape recursion (no conformity needed for shapes).
  const Mesh m0 = lshape_macro();
  double bound = m0.min_angle();
  struct Shape {
    Point2 p[3];
    int ref;
  };
  std::vector<Shape> level;
  for (int t = 0; t < m0.n_triangles(); ++t)
    level.push_back({{m0.vertex_of(t, 0), m0.vertex_of(t, 1), m0.vertex_of(t, 2)},
                     m0.triangles[static_cast<size_t>(t)].refinement_edge});
  auto angle_min = [](const Shape& s) {
    double amin = 1e300;
    for (int k = 0; k < 3; ++k) {
      const Point2 u = s.p[(k + 1) % 3] - s.p[k];
      const Point2 w = s.p[(k + 2) % 3] - s.p[k];
      amin = std::min(amin, std::atan2(std::abs(cross(u, w)), dot(u, w)));
    }
    return amin;
  };
  for (int gen = 1; gen <= 2; ++gen) {
    std::vector<Shape> next;
    for (const Shape& s : level) {
      const Point2 p = s.p[s.ref];
      const Point2 a = s.p[(s.ref + 1) % 3];
      const Point2 b = s.p[(s.ref + 2) % 3];
      const Point2 mid = midpoint(a, b);
      next.push_back({{a, mid, p}, 1});
      next.push_back({{mid, b, p}, 0});
    }
    for (const Shape& s : next) bound = std::min(bound, angle_min(s));
    level = std::move(next);
  }

  // Deep random adaptive refinement must never produce a smaller angle.
  std::mt19937 rng(99);
  Mesh m = m0;
  const double area0 = m.total_area();
  for (int round = 0; round < 10; ++round) {
    std::uniform_int_distribution<int> pick(0, m.n_edges() - 1);
    std::vector<int> marks;
    for (int i = 0; i < 1 + m.n_edges() / 8; ++i) marks.push_back(pick(rng));
    const int before = m.n_triangles();
    m = refine(m, marks).first;
    CHECK(m.n_triangles() > before);
    CHECK(m.min_angle() >= bound - 1e-12);
    CHECK(m.total_area() == doctest::Approx(area0).epsilon(1e-12));
  }
  validate_mesh(m);
}

TEST_CASE("text round trip and VTK header") {
  const Mesh m = lshape_macro();
  std::stringstream s;
  write_mesh_text(m, s);
  const Mesh back = read_mesh_text(s);
  CHECK(back.n_vertices() == m.n_vertices());
  CHECK(back.n_triangles() == m.n_triangles());
  CHECK(back.n_edges() == m.n_edges());
  for (int v = 0; v < m.n_vertices(); ++v) {
    CHECK(back.vertices[static_cast<size_t>(v)].x == m.vertices[static_cast<size_t>(v)].x);
    CHECK(back.vertices[static_cast<size_t>(v)].y == m.vertices[static_cast<size_t>(v)].y);
  }

  std::stringstream vtk;
  write_mesh_vtk(m, vtk);
  CHECK(vtk.str().rfind("# vtk DataFile", 0) == 0);
  CHECK(vtk.str().find("CELL_TYPES 6") != std::string::npos);
}

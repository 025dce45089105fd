#include "adg/problems.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace adg {

Problem make_square_sine() {
  const std::vector<Point2> vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const std::vector<std::array<int, 3>> tris = {{0, 1, 2}, {0, 2, 3}};
  constexpr double pi = 3.14159265358979323846;
  Problem p;
  p.name = "square-sine";
  p.description = "unit square, u = sin(pi x) sin(pi y)";
  p.initial_mesh = build_mesh(vertices, tris);
  p.f = [](Point2 q) {
    return 2.0 * pi * pi * std::sin(pi * q.x) * std::sin(pi * q.y);
  };
  p.exact_gradient = [](Point2 q) {
    return Point2{pi * std::cos(pi * q.x) * std::sin(pi * q.y),
                  pi * std::sin(pi * q.x) * std::cos(pi * q.y)};
  };
  return p;
}

Problem make_lshape_const() {
  const std::vector<Point2> vertices = {{0, 0},  {1, 0},   {1, 1},  {0, 1},
                                        {-1, 1}, {-1, 0},  {-1, -1}, {0, -1}};
  const std::vector<std::array<int, 3>> tris = {{0, 1, 2}, {0, 2, 3}, {0, 3, 4},
                                                {0, 4, 5}, {0, 5, 6}, {0, 6, 7}};
  Problem p;
  p.name = "lshape-const";
  p.description = "L-shaped domain with re-entrant corner at the origin, f = 1";
  p.initial_mesh = build_mesh(vertices, tris);
  p.f = [](Point2) { return 1.0; };
  return p;
}

Problem resolve_problem(const std::string& name_or_path) {
  if (name_or_path == "square-sine") return make_square_sine();
  if (name_or_path == "lshape-const") return make_lshape_const();
  if (std::filesystem::exists(name_or_path)) {
    std::ifstream in(name_or_path);
    if (!in) throw std::invalid_argument("cannot open mesh file: " + name_or_path);
    Problem p;
    p.name = name_or_path;
    p.description = "user mesh, f = 1";
    p.initial_mesh = read_mesh_text(in);
    p.f = [](Point2) { return 1.0; };
    return p;
  }
  throw std::invalid_argument("unknown problem: " + name_or_path +
                              " (expected square-sine, lshape-const, or a mesh file)");
}

}  // namespace adg

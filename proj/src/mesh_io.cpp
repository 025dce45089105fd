#include <istream>
#include <ostream>

#include "adg/mesh.hpp"

namespace adg {

Mesh read_mesh_text(std::istream& in) {
  int nv = 0, nt = 0;
  if (!(in >> nv >> nt) || nv < 3 || nt < 1)
    throw MeshError("mesh file: expected header 'NV NT'");
  std::vector<Point2> vertices(static_cast<size_t>(nv));
  for (int i = 0; i < nv; ++i) {
    if (!(in >> vertices[static_cast<size_t>(i)].x >> vertices[static_cast<size_t>(i)].y))
      throw MeshError("mesh file: bad vertex line");
  }
  std::vector<std::array<int, 3>> tris(static_cast<size_t>(nt));
  for (int i = 0; i < nt; ++i) {
    auto& t = tris[static_cast<size_t>(i)];
    if (!(in >> t[0] >> t[1] >> t[2]))
      throw MeshError("mesh file: bad triangle line");
  }
  return build_mesh(vertices, tris);
}

void write_mesh_text(const Mesh& mesh, std::ostream& out) {
  out << mesh.n_vertices() << ' ' << mesh.n_triangles() << '\n';
  char buf[64];
  for (const Point2& p : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x, p.y);
    out << buf;
  }
  for (const Triangle& t : mesh.triangles)
    out << t.v[0] << ' ' << t.v[1] << ' ' << t.v[2] << '\n';
}

void write_mesh_vtk(const Mesh& mesh, std::ostream& out,
                    const std::vector<double>& cell_data,
                    const std::string& cell_data_name) {
  out << "# vtk DataFile Version 3.0\n"
      << "adaptive-dg mesh\n"
      << "ASCII\n"
      << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.n_vertices() << " double\n";
  char buf[96];
  for (const Point2& p : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g 0\n", p.x, p.y);
    out << buf;
  }
  out << "CELLS " << mesh.n_triangles() << ' ' << 4 * mesh.n_triangles() << '\n';
  for (const Triangle& t : mesh.triangles)
    out << "3 " << t.v[0] << ' ' << t.v[1] << ' ' << t.v[2] << '\n';
  out << "CELL_TYPES " << mesh.n_triangles() << '\n';
  for (int t = 0; t < mesh.n_triangles(); ++t) out << "5\n";
  if (!cell_data.empty() && static_cast<int>(cell_data.size()) == mesh.n_triangles()) {
    out << "CELL_DATA " << mesh.n_triangles() << '\n'
        << "SCALARS " << cell_data_name << " double 1\n"
        << "LOOKUP_TABLE default\n";
    for (double v : cell_data) {
      std::snprintf(buf, sizeof buf, "%.17g\n", v);
      out << buf;
    }
  }
}

}  // namespace adg

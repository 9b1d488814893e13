#include "fekit/vtk.hpp"

#include <fstream>
#include <stdexcept>

#include "fekit/integration.hpp"

namespace fekit {

namespace {

struct CellKind {
  int vtk_type;
  std::vector<int> corner_order;  // lexicographic -> VTK
};

CellKind cell_kind(const Polytope& poly) {
  const int d = poly.num_dims();
  if (d == 1) return {3, {0, 1}};  // VTK_LINE
  if (d == 2 && poly.is_n_cube()) return {9, {0, 1, 3, 2}};  // VTK_QUAD
  if (d == 2 && poly.is_n_simplex()) return {5, {0, 1, 2}};  // VTK_TRIANGLE
  if (d == 3 && poly.is_n_cube()) return {12, {0, 1, 3, 2, 4, 5, 7, 6}};  // VTK_HEXAHEDRON
  if (d == 3 && poly.is_n_simplex()) return {10, {0, 1, 2, 3}};  // VTK_TETRA
  throw std::invalid_argument("vtk writer: unsupported cell topology");
}

void write_header_and_geometry(std::ostream& out, const Triangulation& tri) {
  const CellKind kind = cell_kind(tri.cell_polytope());
  const int corners = tri.cell_polytope().num_vertices();
  const int num_points = tri.num_cells() * corners;

  out << "# vtk DataFile Version 3.0\n";
  out << "fekit output\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << num_points << " double\n";
  for (int c = 0; c < tri.num_cells(); ++c)
    for (const Vec& x : tri.cell_node_coords(c)) out << x[0] << " " << x[1] << " " << x[2] << "\n";

  out << "CELLS " << tri.num_cells() << " " << tri.num_cells() * (corners + 1) << "\n";
  for (int c = 0; c < tri.num_cells(); ++c) {
    out << corners;
    for (int i = 0; i < corners; ++i) out << " " << c * corners + kind.corner_order[static_cast<std::size_t>(i)];
    out << "\n";
  }
  out << "CELL_TYPES " << tri.num_cells() << "\n";
  for (int c = 0; c < tri.num_cells(); ++c) out << kind.vtk_type << "\n";
}

void write_cell_sets(std::ostream& out, const Triangulation& tri) {
  out << "CELL_DATA " << tri.num_cells() << "\n";
  out << "SCALARS set_id int 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < tri.num_cells(); ++c) out << tri.cell_set_id(c) << "\n";
}

}  // namespace

void write_vtk(const Triangulation& triangulation, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("vtk writer: cannot open " + path);
  write_header_and_geometry(out, triangulation);
  write_cell_sets(out, triangulation);
}

void write_vtk(FeSpace& space, const std::vector<VtkField>& fields, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("vtk writer: cannot open " + path);
  const Triangulation& tri = space.triangulation();
  write_header_and_geometry(out, tri);

  const int corners = tri.cell_polytope().num_vertices();
  if (!fields.empty()) {
    // corner reference coordinates (the order-1 geometry node positions)
    std::vector<Vec> corner_coords;
    for (int v = 0; v < corners; ++v) {
      Vec x;
      for (int i = 0; i < tri.num_dims(); ++i)
        x[i] = (tri.cell_polytope().vertex_coords(v) >> i) & 1u ? 1.0 : 0.0;
      corner_coords.push_back(x);
    }

    // geometry map at the corners, for Piola-mapped fields
    Quadrature corner_q;
    corner_q.num_dims = tri.num_dims();
    corner_q.points = corner_coords;
    corner_q.weights.assign(corner_coords.size(), 0.0);
    const ReferenceFe geo = make_reference_fe(tri.num_dims(), tri.topology(), FeType::lagrangian, 1,
                                              FieldType::scalar, true);
    CellMap corner_map;
    corner_map.create(corner_q, geo);

    out << "POINT_DATA " << tri.num_cells() * corners << "\n";
    std::vector<double> dofs;
    ShapeTable physical;
    for (const VtkField& vf : fields) {
      const bool vector_field = space.ref_fe(vf.field, 0).num_components() > 1;
      if (vector_field)
        out << "VECTORS " << vf.name << " double\n";
      else
        out << "SCALARS " << vf.name << " double 1\nLOOKUP_TABLE default\n";

      for (int cell = 0; cell < tri.num_cells(); ++cell) {
        const ReferenceFe& fe = space.ref_fe(vf.field, cell);
        space.gather_cell_values(*vf.function, cell, vf.field, dofs);
        if (fe.num_shape_functions() == 0) {
          for (int v = 0; v < corners; ++v) out << (vector_field ? "0 0 0\n" : "0\n");
          continue;
        }
        corner_map.update(tri.cell_node_coords(cell));
        fe.apply_cell_map(fe.evaluate(corner_coords), corner_map.jacobians(),
                          corner_map.inv_jacobians(), corner_map.det_jacobians(), physical);
        for (int v = 0; v < corners; ++v) {
          if (vector_field) {
            double comp[3] = {0.0, 0.0, 0.0};
            for (int a = 0; a < physical.num_functions; ++a)
              for (int c = 0; c < physical.num_components && c < 3; ++c)
                comp[c] += dofs[static_cast<std::size_t>(a)] * physical.value(a, v, c);
            out << comp[0] << " " << comp[1] << " " << comp[2] << "\n";
          } else {
            double s = 0.0;
            for (int a = 0; a < physical.num_functions; ++a)
              s += dofs[static_cast<std::size_t>(a)] * physical.value(a, v, 0);
            out << s << "\n";
          }
        }
      }
    }
  }
  write_cell_sets(out, tri);
}

}  // namespace fekit

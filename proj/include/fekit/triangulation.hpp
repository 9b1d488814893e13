#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fekit/geometry.hpp"
#include "fekit/polytope.hpp"

namespace fekit {

/// Static conforming mesh: cells of a single polytope topology, the vefs
/// (vertices/edges/faces) they are composed of, the cells around every vef,
/// first-order geometry nodes, boundary flags and user set ids. Immutable
/// after creation apart from the set-id setters.
class Triangulation {
 public:
  /// Brick mesh of a box, cells and vertices numbered lexicographically
  /// (first direction fastest). Boundary vefs get `boundary_set_id` (or the
  /// per-box-face ids in `face_set_ids`, low/high per direction, a vef on
  /// several box faces taking the maximum); interior vefs get set 0.
  static Triangulation structured(int num_dims, const std::vector<int>& cells_per_dim,
                                  const Vec& box_lo, const Vec& box_hi, int boundary_set_id = 1,
                                  const std::vector<int>& face_set_ids = {});

  /// Build from cell-vertex connectivity (vertex ids dense, 0-based; corner
  /// order per cell follows the polytope's corner order). Simplex meshes are
  /// reoriented (cell-wise ascending vertex ids). Optional boundary facet
  /// set assignments: pairs of (set id, unordered vertex tuple).
  static Triangulation from_cell_vertices(
      int num_dims, std::uint32_t topology, std::vector<Vec> vertex_coords,
      std::vector<std::vector<int>> cell_vertices,
      const std::vector<std::pair<int, std::vector<int>>>& boundary_facet_sets = {});

  /// Line-oriented ASCII format, '#' comments, 1-based vertex ids:
  ///   dim <d>
  ///   topology <bitstring of length d, highest direction first>
  ///   vertices <Nv>   followed by Nv coordinate lines
  ///   cells <Nc>      followed by Nc vertex-id lines (polytope corner order)
  ///   boundary_facets <Nb>   optional; lines: <set_id> <v1> ... <vm>
  static Triangulation import_mesh(const std::string& path);
  void export_mesh(const std::string& path) const;

  int num_dims() const { return num_dims_; }
  std::uint32_t topology() const { return cell_polytope().topology(); }
  const Polytope& cell_polytope() const { return *polytope_; }
  int num_cells() const { return static_cast<int>(cell_vertices_.size()); }
  int num_vefs() const { return num_vefs_; }
  int num_vertices() const { return static_cast<int>(vertex_coords_.size()); }
  int num_vefs_per_cell() const { return polytope_->num_n_faces() - 1; }

  /// Composition: global vef ids of a cell, indexed by the polytope's n-face
  /// local ids (the cell itself excluded).
  std::span<const int> vefs_of_cell(int cell) const;
  int vef_gid(int cell, int lid) const { return vefs_of_cell(cell)[static_cast<std::size_t>(lid)]; }
  int vef_lid_in_cell(int cell, int vef) const;

  /// Neighbourhood: cells around a vef, ascending cell ids (clients must not
  /// rely on the order).
  std::span<const int> cells_around(int vef) const;

  int vef_dim(int vef) const { return vef_dims_[static_cast<std::size_t>(vef)]; }
  bool vef_at_boundary(int vef) const { return vefs_at_boundary_[static_cast<std::size_t>(vef)] != 0; }
  int vef_set_id(int vef) const { return vefs_set_ids_[static_cast<std::size_t>(vef)]; }
  void set_vef_set_id(int vef, int id) { vefs_set_ids_[static_cast<std::size_t>(vef)] = id; }
  int cell_set_id(int cell) const { return cells_set_ids_[static_cast<std::size_t>(cell)]; }
  void set_cell_set_id(int cell, int id) { cells_set_ids_[static_cast<std::size_t>(cell)] = id; }

  const std::vector<int>& cell_vertices(int cell) const {
    return cell_vertices_[static_cast<std::size_t>(cell)];
  }
  const Vec& vertex(int v) const { return vertex_coords_[static_cast<std::size_t>(v)]; }

  /// First-order geometry node coordinates of a cell (its corners).
  std::vector<Vec> cell_node_coords(int cell) const;

  /// Corner coordinates of a vef, in the reference coordinate system of the
  /// first cell around it.
  std::vector<Vec> vef_node_coords(int vef) const;

  /// Sorted global vertex tuple of a vef.
  const std::vector<int>& vef_vertices(int vef) const {
    return vef_vertices_[static_cast<std::size_t>(vef)];
  }

  /// Permutation index (rotation-major, identity = 0) translating n-face
  /// local node coordinates of the target cell into those of the source
  /// cell. Both cells must share the vef.
  int permutation_index(int source_cell, int source_lid, int target_cell, int target_lid) const;

  /// Cell-wise ascending vertex sort for simplex meshes; downstream
  /// integration uses |det J|. No-op when already oriented.
  void reorient_simplices();

  /// Global vef ids of all facets (dim-1 vefs), ascending.
  std::vector<int> facet_vefs() const;

 private:
  Triangulation() = default;
  void build_connectivity();

  int num_dims_ = 0;
  const Polytope* polytope_ = nullptr;
  int num_vefs_ = 0;
  std::vector<std::vector<int>> cell_vertices_;
  std::vector<Vec> vertex_coords_;
  std::vector<int> ptr_vefs_x_cell_, lst_vefs_gids_;
  std::vector<int> ptr_cells_around_, lst_cells_around_;
  std::vector<std::vector<int>> vef_vertices_;
  std::vector<std::int8_t> vef_dims_;
  std::vector<std::uint8_t> vefs_at_boundary_;
  std::vector<int> vefs_set_ids_, cells_set_ids_;
};

}  // namespace fekit

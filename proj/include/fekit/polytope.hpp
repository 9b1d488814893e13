#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "fekit/geometry.hpp"

namespace fekit {

// Cell geometries are generated by a chain of directional extrusions of a
// point, one per space dimension. Bit j of the topology bitmap selects the
// extrusion type of direction j: 1 extrudes as a prism, 0 as a pyramid. Every
// boundary entity (n-face) of the resulting polytope is coded by an extrusion
// bitmap e (which directions it extends along) and an anchor bitmap v (the
// corner it starts from), with e and v disjoint. Bit 0 is the first extrusion
// direction, i.e. coordinate axis 0.
//
// The first extrusion of a point gives a segment either way, so bit 0 of the
// topology is geometrically ambiguous. Creation normalizes it (to 0 in 1D, to
// bit 1 elsewhere), and both spellings of a topology are accepted: 11 and 10
// are the quadrilateral, 111 and 110 the hexahedron, 000 and 001 the
// tetrahedron, 100 the triangular prism, 011 and 010 the square pyramid.

struct NFace {
  std::uint32_t extrusion = 0;
  std::uint32_t anchor = 0;

  int dim() const { return __builtin_popcount(extrusion); }
  bool operator==(const NFace& o) const {
    return extrusion == o.extrusion && anchor == o.anchor;
  }
};

class Polytope {
 public:
  static constexpr int max_dims = 15;

  Polytope(int num_dims, std::uint32_t topology);

  int num_dims() const { return num_dims_; }
  std::uint32_t topology() const { return topology_; }
  bool is_n_cube() const { return topology_ == (1u << num_dims_) - 1u; }
  bool is_n_simplex() const { return topology_ == 0u; }

  int num_n_faces() const { return static_cast<int>(n_faces_.size()); }
  int num_n_faces(int dim) const { return ptr_dim_[dim + 1] - ptr_dim_[dim]; }
  int first_n_face(int dim) const { return ptr_dim_[dim]; }
  const NFace& n_face(int id) const { return n_faces_[static_cast<std::size_t>(id)]; }
  int dim_of(int id) const { return n_face(id).dim(); }

  /// Offsets of the first n-face of each dimension, length num_dims + 2;
  /// the last entry is the total n-face count (the cell itself included last).
  const std::vector<int>& ptr_n_faces_x_dim() const { return ptr_dim_; }

  /// Index of an (e, v) code in the n-face list; -1 if not an n-face.
  int index_of(const NFace& f) const;
  bool contains(const NFace& f) const { return index_of(f) >= 0; }

  int num_vertices() const { return num_n_faces(0); }
  int num_facets() const { return num_n_faces(num_dims_ - 1); }

  /// Facets (dim-1 boundary faces) of an n-face. Vertices have none.
  std::vector<NFace> facets_of(const NFace& f) const;
  std::vector<int> facet_ids_of(int nface_id) const;

  /// All n-faces of the closure of an n-face (itself included), as ids.
  std::vector<int> closure_of(int nface_id) const;

  /// Extrusion directions of an n-face, ascending (the local-to-global
  /// direction map of its reference polytope).
  std::vector<int> extrusion_dirs(const NFace& f) const;

  /// Topology bits of an n-face restricted to its extrusion directions.
  std::uint32_t restricted_topology(const NFace& f) const;

  /// Vertex ids (dim-0 n-face indices) of the corners of an n-face, in the
  /// local corner order of its reference polytope.
  std::vector<int> corners_of(int nface_id) const;

  /// Anchor bitmap of vertex id i (its 0/1 coordinates).
  std::uint32_t vertex_coords(int vertex_id) const { return n_face(vertex_id).anchor; }

 private:
  std::uint32_t code(const NFace& f) const {
    return (f.extrusion << num_dims_) | f.anchor;
  }

  int num_dims_;
  std::uint32_t topology_;
  std::vector<NFace> n_faces_;
  std::vector<int> ptr_dim_;
  std::unordered_map<std::uint32_t, int> code_to_index_;
};

/// Shared immutable reference polytope instances, keyed by (dims, topology).
const Polytope& ref_polytope(int dims, std::uint32_t topology);

/// Affine map of an n-face onto itself induced by a corner permutation, in
/// lexicographic node labels of order k. Used both to translate DOF node ids
/// between the two cells sharing an n-face and to translate facet quadrature
/// point ids.
struct CornerPermutation {
  int dim = 0;                   // n-face dimension
  std::vector<int> target_to_source;  // corner ids, target cell's view -> source cell's view

  /// Apply to a lexicographic label tuple of order k (all directions equal).
  /// `corner_coords[c]` are the 0/1 coordinates of corner c of the reference
  /// polytope of the n-face.
  std::vector<int> apply(const std::vector<int>& tuple, int k,
                         const std::vector<std::vector<int>>& corner_coords) const;
};

/// Encode a corner permutation of a cube or simplex n-face as a compact
/// index: rotation-major composition of a rotation (anchor position, varies
/// slowest) and an orientation (axis swap / reflection). Identity is 0.
/// Cube edges have 2 indices, cube faces 8, triangle faces 6.
int encode_permutation(const Polytope& nface_ref, const std::vector<int>& target_to_source);

/// Inverse of encode_permutation.
std::vector<int> decode_permutation(const Polytope& nface_ref, int index);

int num_permutations(const Polytope& nface_ref);

}  // namespace fekit

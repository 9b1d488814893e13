#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "fekit/geometry.hpp"
#include "fekit/polytope.hpp"

namespace fekit {

/// Equidistant Lagrangian node tuples of a polytope for a given order: the
/// full tensor product along prism directions, truncated (|alpha| bounded)
/// along pyramid directions. Tuples are emitted consecutively with the first
/// coordinate running fastest.
std::vector<std::vector<int>> generate_node_tuples(std::uint32_t topology,
                                                   const std::vector<int>& order);

/// The node set of a polytope at a given order, with lexicographic labels,
/// reference coordinates alpha/k, and the ownership relation between nodes
/// and n-faces. Immutable after creation.
class NodeArray {
 public:
  NodeArray(const Polytope& polytope, std::vector<int> order);

  const Polytope& polytope() const { return *polytope_; }
  const std::vector<int>& order() const { return order_; }
  int num_nodes() const { return static_cast<int>(tuples_.size()); }
  const std::vector<int>& node_tuple(int i) const { return tuples_[static_cast<std::size_t>(i)]; }

  /// Reference coordinates alpha/k. A direction of order 0 collapses to the
  /// midpoint (needed by the anisotropic Raviart-Thomas pre-bases).
  Vec ref_coords(int i) const;

  /// Index of a lexicographic tuple, -1 if not a node.
  int index_of(const std::vector<int>& tuple) const;

  /// Smallest-dimension n-face whose closure contains the node.
  int owner_n_face(int node) const { return owner_[static_cast<std::size_t>(node)]; }

  /// Linear n-face map: label of a node of the n-face's reference polytope
  /// expressed in base-polytope labels.
  std::vector<int> map_to_base(int nface_id, const std::vector<int>& local_tuple) const;

  /// Base node ids sitting on an n-face, in the n-face's local lexicographic
  /// order. Closed traversal covers the whole closure of the n-face; open
  /// traversal only the nodes the n-face owns.
  std::vector<int> nodes_on_n_face(int nface_id, bool closed) const;

 private:
  std::uint64_t pack(const std::vector<int>& tuple) const;

  const Polytope* polytope_;
  std::vector<int> order_;
  std::vector<std::vector<int>> tuples_;
  std::unordered_map<std::uint64_t, int> tuple_to_index_;
  std::vector<int> owner_;
};

}  // namespace fekit

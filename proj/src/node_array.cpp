#include "fekit/node_array.hpp"

#include <stdexcept>

namespace fekit {

namespace {

void recurse_tuples(std::uint32_t topology, const std::vector<int>& order, int j, int rem,
                    std::vector<int>& scratch, std::vector<std::vector<int>>& out) {
  if (j < 0) {
    out.push_back(scratch);
    return;
  }
  const bool prism = (topology >> j) & 1u;
  const int limit = prism ? order[static_cast<std::size_t>(j)] : rem;
  for (int beta = 0; beta <= limit; ++beta) {
    scratch[static_cast<std::size_t>(j)] = beta;
    recurse_tuples(topology, order, j - 1, prism ? rem : rem - beta, scratch, out);
  }
}

}  // namespace

std::vector<std::vector<int>> generate_node_tuples(std::uint32_t topology,
                                                   const std::vector<int>& order) {
  const int d = static_cast<int>(order.size());
  if (d == 0) return {{}};
  for (int k : order)
    if (k < 0) throw std::invalid_argument("node array: negative order");
  const bool cube = topology == (1u << d) - 1u;
  if (!cube) {
    for (int k : order)
      if (k != order[0])
        throw std::invalid_argument("node array: mixed orders on a non-n-cube topology");
  }
  std::vector<std::vector<int>> out;
  std::vector<int> scratch(static_cast<std::size_t>(d), 0);
  recurse_tuples(topology, order, d - 1, order[0], scratch, out);
  return out;
}

NodeArray::NodeArray(const Polytope& polytope, std::vector<int> order)
    : polytope_(&polytope), order_(std::move(order)) {
  if (static_cast<int>(order_.size()) != polytope.num_dims())
    throw std::invalid_argument("node array: order size must match the polytope dimension");
  tuples_ = generate_node_tuples(polytope.topology(), order_);
  for (int i = 0; i < num_nodes(); ++i) tuple_to_index_.emplace(pack(tuples_[static_cast<std::size_t>(i)]), i);

  // Owner n-face of a node: the first (smallest-dimension) n-face whose
  // closure contains it. Every node gets exactly one owner.
  owner_.assign(tuples_.size(), -1);
  for (int nf = 0; nf < polytope.num_n_faces(); ++nf) {
    for (int node : nodes_on_n_face(nf, /*closed=*/true))
      if (owner_[static_cast<std::size_t>(node)] < 0) owner_[static_cast<std::size_t>(node)] = nf;
  }
}

std::uint64_t NodeArray::pack(const std::vector<int>& tuple) const {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i)
    key |= static_cast<std::uint64_t>(tuple[i] & 0xff) << (8 * i);
  return key;
}

Vec NodeArray::ref_coords(int i) const {
  const auto& t = node_tuple(i);
  Vec x;
  for (std::size_t j = 0; j < t.size(); ++j) {
    const int k = order_[j];
    x[static_cast<int>(j)] = k == 0 ? 0.5 : static_cast<double>(t[j]) / k;
  }
  return x;
}

int NodeArray::index_of(const std::vector<int>& tuple) const {
  auto it = tuple_to_index_.find(pack(tuple));
  return it == tuple_to_index_.end() ? -1 : it->second;
}

std::vector<int> NodeArray::map_to_base(int nface_id, const std::vector<int>& local_tuple) const {
  const NFace& f = polytope_->n_face(nface_id);
  const auto dirs = polytope_->extrusion_dirs(f);
  const std::uint32_t tr = polytope_->restricted_topology(f);
  if (local_tuple.size() != dirs.size())
    throw std::invalid_argument("node array: local tuple size mismatch");

  int pyramid_sum = 0;
  for (std::size_t s = 0; s < dirs.size(); ++s)
    if (!(tr & (1u << s))) pyramid_sum += local_tuple[s];

  const int d = polytope_->num_dims();
  std::vector<int> base(static_cast<std::size_t>(d), 0);
  for (int i = 0; i < d; ++i)
    if (f.anchor & (1u << i)) base[static_cast<std::size_t>(i)] = order_[static_cast<std::size_t>(i)] - pyramid_sum;
  for (std::size_t s = 0; s < dirs.size(); ++s)
    base[static_cast<std::size_t>(dirs[s])] += local_tuple[s];
  return base;
}

std::vector<int> NodeArray::nodes_on_n_face(int nface_id, bool closed) const {
  const NFace& f = polytope_->n_face(nface_id);
  const auto dirs = polytope_->extrusion_dirs(f);
  std::vector<int> local_order;
  local_order.reserve(dirs.size());
  for (int dir : dirs) local_order.push_back(order_[static_cast<std::size_t>(dir)]);

  std::vector<int> out;
  for (const auto& local : generate_node_tuples(polytope_->restricted_topology(f), local_order)) {
    const int id = index_of(map_to_base(nface_id, local));
    if (id < 0) throw std::logic_error("node array: mapped node is not a base node");
    if (closed || owner_[static_cast<std::size_t>(id)] == nface_id) out.push_back(id);
  }
  return out;
}

}  // namespace fekit

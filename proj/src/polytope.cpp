#include "fekit/polytope.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>

namespace fekit {

namespace {

std::uint32_t normalize_topology(int num_dims, std::uint32_t t) {
  if (num_dims == 0) return 0;
  if (t >= (1u << num_dims)) throw std::invalid_argument("polytope: topology has bits beyond num_dims");
  if (num_dims == 1) return 0;
  // Bit 0 is geometrically irrelevant; tie it to bit 1 so that n-cubes are
  // all-ones and n-simplices all-zeros in canonical form.
  const std::uint32_t bit1 = (t >> 1) & 1u;
  return (t & ~1u) | bit1;
}

}  // namespace

Polytope::Polytope(int num_dims, std::uint32_t topology)
    : num_dims_(num_dims), topology_(normalize_topology(num_dims, topology)) {
  if (num_dims < 0 || num_dims > max_dims)
    throw std::invalid_argument("polytope: dimension out of range");

  // Set-extrusion recursion: start from the anchor vertex and extrude through
  // every direction, collecting all n-faces produced along the way.
  std::set<std::pair<std::uint32_t, std::uint32_t>> faces;
  faces.insert({0u, 0u});
  for (int j = 0; j < num_dims_; ++j) {
    const std::uint32_t bit = 1u << j;
    std::set<std::pair<std::uint32_t, std::uint32_t>> next;
    for (const auto& [e, v] : faces) {
      next.insert({e, v});
      next.insert({e | bit, v});  // the extruded copy
      if (topology_ & bit)
        next.insert({e, v | bit});  // prism: translated copy of the base
      else
        next.insert({0u, bit});  // pyramid: the apex vertex
    }
    faces = std::move(next);
  }

  n_faces_.reserve(faces.size());
  for (const auto& [e, v] : faces) n_faces_.push_back(NFace{e, v});
  std::sort(n_faces_.begin(), n_faces_.end(), [this](const NFace& a, const NFace& b) {
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    return code(a) < code(b);
  });

  ptr_dim_.assign(static_cast<std::size_t>(num_dims_) + 2, 0);
  for (const NFace& f : n_faces_) ++ptr_dim_[static_cast<std::size_t>(f.dim()) + 1];
  for (std::size_t i = 1; i < ptr_dim_.size(); ++i) ptr_dim_[i] += ptr_dim_[i - 1];

  for (int i = 0; i < num_n_faces(); ++i) code_to_index_.emplace(code(n_faces_[i]), i);
}

int Polytope::index_of(const NFace& f) const {
  auto it = code_to_index_.find(code(f));
  return it == code_to_index_.end() ? -1 : it->second;
}

std::vector<NFace> Polytope::facets_of(const NFace& f) const {
  if (f.extrusion == 0u) return {};
  const int j = 31 - __builtin_clz(f.extrusion);  // last extrusion direction
  const std::uint32_t bit = 1u << j;
  const std::uint32_t base_e = f.extrusion & ~bit;
  if (base_e == 0u) {
    // Boundary of a segment: anchor plus the translated anchor for a prism
    // step, anchor plus the apex for a pyramid step (coning collapses the
    // anchor onto the apex).
    const std::uint32_t other = (topology_ & bit) ? (f.anchor | bit) : bit;
    return {NFace{0u, f.anchor}, NFace{0u, other}};
  }
  std::vector<NFace> result;
  result.push_back(NFace{base_e, f.anchor});
  if (topology_ & bit) result.push_back(NFace{base_e, f.anchor | bit});
  for (const NFace& g : facets_of(NFace{base_e, f.anchor}))
    result.push_back(NFace{g.extrusion | bit, g.anchor});
  return result;
}

std::vector<int> Polytope::facet_ids_of(int nface_id) const {
  std::vector<int> ids;
  for (const NFace& g : facets_of(n_face(nface_id))) {
    const int id = index_of(g);
    if (id < 0) throw std::logic_error("polytope: facet not found in n-face list");
    ids.push_back(id);
  }
  return ids;
}

std::vector<int> Polytope::closure_of(int nface_id) const {
  std::set<int> seen{nface_id};
  std::vector<int> stack{nface_id};
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    for (int g : facet_ids_of(id))
      if (seen.insert(g).second) stack.push_back(g);
  }
  return {seen.begin(), seen.end()};
}

std::vector<int> Polytope::extrusion_dirs(const NFace& f) const {
  std::vector<int> dirs;
  for (int j = 0; j < num_dims_; ++j)
    if (f.extrusion & (1u << j)) dirs.push_back(j);
  return dirs;
}

std::uint32_t Polytope::restricted_topology(const NFace& f) const {
  std::uint32_t t = 0;
  int s = 0;
  for (int j = 0; j < num_dims_; ++j)
    if (f.extrusion & (1u << j)) {
      if (topology_ & (1u << j)) t |= 1u << s;
      ++s;
    }
  return t;
}

std::vector<int> Polytope::corners_of(int nface_id) const {
  const NFace& f = n_face(nface_id);
  const auto dirs = extrusion_dirs(f);
  const int m = static_cast<int>(dirs.size());
  const Polytope& ref = ref_polytope(m, restricted_topology(f));

  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(ref.num_vertices()));
  for (int c = 0; c < ref.num_vertices(); ++c) {
    // Map the reference corner through the n-face linear map with order 1.
    const std::uint32_t local = ref.vertex_coords(c);
    int pyramid_sum = 0;
    const std::uint32_t tr = restricted_topology(f);
    for (int s = 0; s < m; ++s)
      if (!(tr & (1u << s)) && (local & (1u << s))) ++pyramid_sum;
    std::uint32_t base = 0;
    for (int s = 0; s < m; ++s)
      if (local & (1u << s)) base |= 1u << dirs[static_cast<std::size_t>(s)];
    if (pyramid_sum == 0) base |= f.anchor;
    const int id = index_of(NFace{0u, base});
    if (id < 0) throw std::logic_error("polytope: corner vertex not found");
    out.push_back(id);
  }
  return out;
}

const Polytope& ref_polytope(int dims, std::uint32_t topology) {
  static std::map<std::pair<int, std::uint32_t>, Polytope> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  const auto key = std::make_pair(dims, normalize_topology(dims, topology));
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, Polytope(dims, topology)).first;
  return it->second;
}

std::vector<int> CornerPermutation::apply(const std::vector<int>& tuple, int k,
                                          const std::vector<std::vector<int>>& corner_coords) const {
  const int m = dim;
  std::vector<int> out(static_cast<std::size_t>(m), 0);
  const auto& origin = corner_coords[static_cast<std::size_t>(target_to_source[0])];
  for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] = k * origin[static_cast<std::size_t>(i)];
  for (int s = 0; s < m; ++s) {
    // Corner reached from the origin along local direction s always exists
    // (translated base for prisms, apex for pyramids) and has corner id equal
    // to the position of anchor 1<<s in the corner list.
    int adj = -1;
    for (std::size_t c = 0; c < corner_coords.size(); ++c) {
      bool is_unit = true;
      for (int i = 0; i < m; ++i)
        if (corner_coords[c][static_cast<std::size_t>(i)] != (i == s ? 1 : 0)) is_unit = false;
      if (is_unit) {
        adj = static_cast<int>(c);
        break;
      }
    }
    if (adj < 0) throw std::logic_error("corner permutation: unit corner missing");
    const auto& img = corner_coords[static_cast<std::size_t>(target_to_source[static_cast<std::size_t>(adj)])];
    for (int i = 0; i < m; ++i)
      out[static_cast<std::size_t>(i)] +=
          tuple[static_cast<std::size_t>(s)] * (img[static_cast<std::size_t>(i)] - origin[static_cast<std::size_t>(i)]);
  }
  return out;
}

int num_permutations(const Polytope& nface_ref) {
  const int m = nface_ref.num_dims();
  if (m == 0) return 1;
  if (m == 1) return 2;
  if (m == 2 && nface_ref.is_n_cube()) return 8;
  if (m == 2 && nface_ref.is_n_simplex()) return 6;
  throw std::invalid_argument("permutations: unsupported n-face type");
}

std::vector<int> decode_permutation(const Polytope& nface_ref, int index) {
  const int m = nface_ref.num_dims();
  if (index < 0 || index >= num_permutations(nface_ref))
    throw std::out_of_range("permutation index out of range");
  if (m == 0) return {0};
  if (m == 1) {
    const int r = index;
    return {r, r ^ 1};
  }
  if (nface_ref.is_n_cube()) {
    const int r = index / 2, o = index % 2;
    return {r, r ^ (o ? 2 : 1), r ^ (o ? 1 : 2), r ^ 3};
  }
  // Triangle: rotation r of the three corners, optionally composed with the
  // axis-swap reflection.
  const int r = index / 2, o = index % 2;
  if (o == 0) return {r % 3, (r + 1) % 3, (r + 2) % 3};
  return {r % 3, (r + 2) % 3, (r + 1) % 3};
}

int encode_permutation(const Polytope& nface_ref, const std::vector<int>& target_to_source) {
  const int n = num_permutations(nface_ref);
  for (int p = 0; p < n; ++p)
    if (decode_permutation(nface_ref, p) == target_to_source) return p;
  throw std::runtime_error("permutation: corner matching is not an admissible isometry");
}

}  // namespace fekit

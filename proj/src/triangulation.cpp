#include "fekit/triangulation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace fekit {

namespace {

std::vector<int> sorted_tuple(std::vector<int> t) {
  std::sort(t.begin(), t.end());
  return t;
}

}  // namespace

std::span<const int> Triangulation::vefs_of_cell(int cell) const {
  const int begin = ptr_vefs_x_cell_[static_cast<std::size_t>(cell)];
  const int end = ptr_vefs_x_cell_[static_cast<std::size_t>(cell) + 1];
  return {lst_vefs_gids_.data() + begin, static_cast<std::size_t>(end - begin)};
}

int Triangulation::vef_lid_in_cell(int cell, int vef) const {
  const auto vefs = vefs_of_cell(cell);
  for (std::size_t i = 0; i < vefs.size(); ++i)
    if (vefs[i] == vef) return static_cast<int>(i);
  return -1;
}

std::span<const int> Triangulation::cells_around(int vef) const {
  const int begin = ptr_cells_around_[static_cast<std::size_t>(vef)];
  const int end = ptr_cells_around_[static_cast<std::size_t>(vef) + 1];
  return {lst_cells_around_.data() + begin, static_cast<std::size_t>(end - begin)};
}

std::vector<Vec> Triangulation::cell_node_coords(int cell) const {
  std::vector<Vec> out;
  out.reserve(cell_vertices(cell).size());
  for (int v : cell_vertices(cell)) out.push_back(vertex(v));
  return out;
}

std::vector<Vec> Triangulation::vef_node_coords(int vef) const {
  const int cell = cells_around(vef)[0];
  const int lid = vef_lid_in_cell(cell, vef);
  std::vector<Vec> out;
  for (int corner : polytope_->corners_of(lid)) out.push_back(vertex(cell_vertices(cell)[static_cast<std::size_t>(corner)]));
  return out;
}

std::vector<int> Triangulation::facet_vefs() const {
  std::vector<int> out;
  for (int v = 0; v < num_vefs_; ++v)
    if (vef_dim(v) == num_dims_ - 1) out.push_back(v);
  return out;
}

int Triangulation::permutation_index(int source_cell, int source_lid, int target_cell,
                                     int target_lid) const {
  if (vef_gid(source_cell, source_lid) != vef_gid(target_cell, target_lid))
    throw std::invalid_argument("permutation_index: cells do not share the n-face");
  const auto src_corners = polytope_->corners_of(source_lid);
  const auto tgt_corners = polytope_->corners_of(target_lid);
  std::vector<int> src_gids, tgt_gids;
  for (int c : src_corners) src_gids.push_back(cell_vertices(source_cell)[static_cast<std::size_t>(c)]);
  for (int c : tgt_corners) tgt_gids.push_back(cell_vertices(target_cell)[static_cast<std::size_t>(c)]);

  std::vector<int> target_to_source(tgt_gids.size());
  for (std::size_t i = 0; i < tgt_gids.size(); ++i) {
    const auto it = std::find(src_gids.begin(), src_gids.end(), tgt_gids[i]);
    if (it == src_gids.end())
      throw std::invalid_argument("permutation_index: inconsistent facet vertex sets");
    target_to_source[i] = static_cast<int>(it - src_gids.begin());
  }
  const NFace& f = polytope_->n_face(source_lid);
  const Polytope& ref = ref_polytope(f.dim(), polytope_->restricted_topology(f));
  return encode_permutation(ref, target_to_source);
}

void Triangulation::reorient_simplices() {
  if (!polytope_->is_n_simplex()) return;
  bool changed = false;
  for (auto& cv : cell_vertices_) {
    if (!std::is_sorted(cv.begin(), cv.end())) {
      std::sort(cv.begin(), cv.end());
      changed = true;
    }
  }
  if (changed) build_connectivity();
}

void Triangulation::build_connectivity() {
  const Polytope& poly = *polytope_;
  const int d = num_dims_;
  const int nv_cell = poly.num_vertices();
  const int n_vefs_cell = num_vefs_per_cell();

  for (std::size_t c = 0; c < cell_vertices_.size(); ++c) {
    if (static_cast<int>(cell_vertices_[c].size()) != nv_cell)
      throw std::invalid_argument("triangulation: wrong vertex count for the cell topology");
    for (int v : cell_vertices_[c])
      if (v < 0 || v >= num_vertices())
        throw std::invalid_argument("triangulation: vertex id out of range");
  }

  // Distinct (dimension, sorted vertex tuple) pairs become the global vefs:
  // vertices keep their ids, higher-dimensional vefs are numbered by first
  // touch in a lexicographic cell sweep.
  std::map<std::vector<int>, std::pair<int, int>> key_to_vef;  // tuple -> (dim, gid)
  vef_vertices_.clear();
  vef_dims_.clear();
  for (int v = 0; v < num_vertices(); ++v) {
    key_to_vef[{v}] = {0, v};
    vef_vertices_.push_back({v});
    vef_dims_.push_back(0);
  }
  num_vefs_ = num_vertices();

  ptr_vefs_x_cell_.assign(cell_vertices_.size() + 1, 0);
  lst_vefs_gids_.assign(cell_vertices_.size() * static_cast<std::size_t>(n_vefs_cell), -1);
  for (int c = 0; c < num_cells(); ++c) {
    ptr_vefs_x_cell_[static_cast<std::size_t>(c)] = c * n_vefs_cell;
    for (int lid = 0; lid < n_vefs_cell; ++lid) {
      const int dim = poly.dim_of(lid);
      std::vector<int> tuple;
      for (int corner : poly.corners_of(lid))
        tuple.push_back(cell_vertices_[static_cast<std::size_t>(c)][static_cast<std::size_t>(corner)]);
      tuple = sorted_tuple(std::move(tuple));
      auto it = key_to_vef.find(tuple);
      if (it == key_to_vef.end()) {
        it = key_to_vef.emplace(tuple, std::make_pair(dim, num_vefs_)).first;
        vef_vertices_.push_back(tuple);
        vef_dims_.push_back(static_cast<std::int8_t>(dim));
        ++num_vefs_;
      } else if (it->second.first != dim) {
        throw std::runtime_error("triangulation: vertex tuple shared by n-faces of different dimension");
      }
      lst_vefs_gids_[static_cast<std::size_t>(c * n_vefs_cell + lid)] = it->second.second;
    }
  }
  ptr_vefs_x_cell_[cell_vertices_.size()] = num_cells() * n_vefs_cell;

  // cells around each vef, ascending cell ids by construction
  ptr_cells_around_.assign(static_cast<std::size_t>(num_vefs_) + 1, 0);
  for (int gid : lst_vefs_gids_) ++ptr_cells_around_[static_cast<std::size_t>(gid) + 1];
  for (std::size_t i = 1; i < ptr_cells_around_.size(); ++i) ptr_cells_around_[i] += ptr_cells_around_[i - 1];
  lst_cells_around_.assign(lst_vefs_gids_.size(), -1);
  std::vector<int> cursor(ptr_cells_around_.begin(), ptr_cells_around_.end() - 1);
  for (int c = 0; c < num_cells(); ++c)
    for (int gid : vefs_of_cell(c)) lst_cells_around_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(gid)]++)] = c;

  // conformity: an interior facet is shared by exactly two cells
  for (int v = 0; v < num_vefs_; ++v)
    if (vef_dim(v) == d - 1 && cells_around(v).size() > 2)
      throw std::runtime_error("triangulation: nonconforming mesh, facet shared by more than two cells");

  // boundary facets and the closure of their vefs
  vefs_at_boundary_.assign(static_cast<std::size_t>(num_vefs_), 0);
  for (int v = 0; v < num_vefs_; ++v) {
    if (vef_dim(v) != d - 1 || cells_around(v).size() != 1) continue;
    const int cell = cells_around(v)[0];
    const int lid = vef_lid_in_cell(cell, v);
    for (int sub : poly.closure_of(lid)) vefs_at_boundary_[static_cast<std::size_t>(vef_gid(cell, sub))] = 1;
  }

  if (vefs_set_ids_.size() != static_cast<std::size_t>(num_vefs_))
    vefs_set_ids_.assign(static_cast<std::size_t>(num_vefs_), 0);
  if (cells_set_ids_.size() != cell_vertices_.size()) cells_set_ids_.assign(cell_vertices_.size(), 0);
}

Triangulation Triangulation::from_cell_vertices(
    int num_dims, std::uint32_t topology, std::vector<Vec> vertex_coords,
    std::vector<std::vector<int>> cell_vertices,
    const std::vector<std::pair<int, std::vector<int>>>& boundary_facet_sets) {
  if (num_dims < 1 || num_dims > max_space_dims)
    throw std::invalid_argument("triangulation: dimension out of range");
  if (cell_vertices.empty()) throw std::invalid_argument("triangulation: empty cell list");
  Triangulation tri;
  tri.num_dims_ = num_dims;
  tri.polytope_ = &ref_polytope(num_dims, topology);
  tri.vertex_coords_ = std::move(vertex_coords);
  tri.cell_vertices_ = std::move(cell_vertices);
  if (tri.polytope_->is_n_simplex())
    for (auto& cv : tri.cell_vertices_) std::sort(cv.begin(), cv.end());
  tri.build_connectivity();

  // Boundary vef sets: everything on the boundary defaults to set 1; listed
  // facets get their id, and their sub-vefs inherit the maximum incident id.
  for (int v = 0; v < tri.num_vefs_; ++v)
    if (tri.vef_at_boundary(v)) tri.vefs_set_ids_[static_cast<std::size_t>(v)] = 1;
  if (!boundary_facet_sets.empty()) {
    std::map<std::vector<int>, int> facet_of_tuple;
    for (int v = 0; v < tri.num_vefs_; ++v)
      if (tri.vef_dim(v) == num_dims - 1) facet_of_tuple[tri.vef_vertices(v)] = v;
    for (const auto& [set_id, tuple] : boundary_facet_sets) {
      const auto it = facet_of_tuple.find(sorted_tuple(tuple));
      if (it == facet_of_tuple.end())
        throw std::runtime_error("triangulation: boundary facet tuple does not match any facet");
      const int facet = it->second;
      if (!tri.vef_at_boundary(facet))
        throw std::runtime_error("triangulation: listed facet is not on the boundary");
      const int cell = tri.cells_around(facet)[0];
      const int lid = tri.vef_lid_in_cell(cell, facet);
      tri.vefs_set_ids_[static_cast<std::size_t>(facet)] = set_id;
      for (int sub : tri.polytope_->closure_of(lid)) {
        const int sub_gid = tri.vef_gid(cell, sub);
        if (sub_gid != facet)
          tri.vefs_set_ids_[static_cast<std::size_t>(sub_gid)] =
              std::max(tri.vefs_set_ids_[static_cast<std::size_t>(sub_gid)], set_id);
      }
    }
  }
  return tri;
}

Triangulation Triangulation::structured(int num_dims, const std::vector<int>& cells_per_dim,
                                        const Vec& box_lo, const Vec& box_hi, int boundary_set_id,
                                        const std::vector<int>& face_set_ids) {
  if (static_cast<int>(cells_per_dim.size()) != num_dims)
    throw std::invalid_argument("structured: cells_per_dim size mismatch");
  for (int n : cells_per_dim)
    if (n < 1) throw std::invalid_argument("structured: need at least one cell per direction");
  for (int i = 0; i < num_dims; ++i)
    if (!(box_hi[i] > box_lo[i])) throw std::invalid_argument("structured: degenerate box");
  if (!face_set_ids.empty() && static_cast<int>(face_set_ids.size()) != 2 * num_dims)
    throw std::invalid_argument("structured: face_set_ids needs 2*dim entries");

  std::vector<int> npts(cells_per_dim.begin(), cells_per_dim.end());
  for (auto& n : npts) ++n;
  int num_vertices = 1;
  for (int n : npts) num_vertices *= n;

  std::vector<Vec> coords(static_cast<std::size_t>(num_vertices));
  std::vector<int> idx(static_cast<std::size_t>(num_dims), 0);
  for (int v = 0; v < num_vertices; ++v) {
    for (int i = 0; i < num_dims; ++i)
      coords[static_cast<std::size_t>(v)][i] =
          box_lo[i] + (box_hi[i] - box_lo[i]) * idx[static_cast<std::size_t>(i)] / cells_per_dim[static_cast<std::size_t>(i)];
    for (int i = 0; i < num_dims; ++i) {
      if (++idx[static_cast<std::size_t>(i)] < npts[static_cast<std::size_t>(i)]) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
  }

  int num_cells = 1;
  for (int n : cells_per_dim) num_cells *= n;
  std::vector<std::vector<int>> cells;
  cells.reserve(static_cast<std::size_t>(num_cells));
  std::fill(idx.begin(), idx.end(), 0);
  const int corners = 1 << num_dims;
  for (int c = 0; c < num_cells; ++c) {
    std::vector<int> cv;
    cv.reserve(static_cast<std::size_t>(corners));
    for (int b = 0; b < corners; ++b) {
      int gid = 0, stride = 1;
      for (int i = 0; i < num_dims; ++i) {
        gid += (idx[static_cast<std::size_t>(i)] + ((b >> i) & 1)) * stride;
        stride *= npts[static_cast<std::size_t>(i)];
      }
      cv.push_back(gid);
    }
    cells.push_back(std::move(cv));
    for (int i = 0; i < num_dims; ++i) {
      if (++idx[static_cast<std::size_t>(i)] < cells_per_dim[static_cast<std::size_t>(i)]) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
  }

  Triangulation tri =
      from_cell_vertices(num_dims, (1u << num_dims) - 1u, std::move(coords), std::move(cells));

  // Geometric classification of boundary vefs against the box faces.
  for (int v = 0; v < tri.num_vefs(); ++v) {
    if (!tri.vef_at_boundary(v)) continue;
    int id = 0;
    if (face_set_ids.empty()) {
      id = boundary_set_id;
    } else {
      const auto& verts = tri.vef_vertices(v);
      for (int i = 0; i < num_dims; ++i) {
        for (int side = 0; side < 2; ++side) {
          const double plane = side == 0 ? box_lo[i] : box_hi[i];
          bool on_face = true;
          for (int g : verts)
            if (std::abs(tri.vertex(g)[i] - plane) > 1e-14 * (std::abs(plane) + 1.0)) on_face = false;
          if (on_face) id = std::max(id, face_set_ids[static_cast<std::size_t>(2 * i + side)]);
        }
      }
      if (id == 0) id = boundary_set_id;
    }
    tri.set_vef_set_id(v, id);
  }
  return tri;
}

namespace {

struct LineReader {
  std::ifstream in;
  int line_no = 0;
  explicit LineReader(const std::string& path) : in(path) {}

  bool next(std::string& out) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream probe(line);
      std::string tok;
      if (probe >> tok) {
        out = line;
        return true;
      }
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("mesh parse error at line " + std::to_string(line_no) + ": " + what);
  }
};

}  // namespace

Triangulation Triangulation::import_mesh(const std::string& path) {
  LineReader reader(path);
  if (!reader.in) throw std::runtime_error("cannot open mesh file: " + path);
  std::string line, key;

  auto expect_key = [&](const char* name) -> std::istringstream {
    if (!reader.next(line)) reader.fail(std::string("expected '") + name + "'");
    std::istringstream ss(line);
    ss >> key;
    if (key != name) reader.fail(std::string("expected '") + name + "', got '" + key + "'");
    return ss;
  };

  int dims = 0;
  {
    auto ss = expect_key("dim");
    if (!(ss >> dims) || dims < 1) reader.fail("invalid dimension");
  }
  std::uint32_t topology = 0;
  {
    auto ss = expect_key("topology");
    std::string bits;
    if (!(ss >> bits) || static_cast<int>(bits.size()) != dims) reader.fail("invalid topology bitstring");
    for (int i = 0; i < dims; ++i) {
      const char c = bits[static_cast<std::size_t>(dims - 1 - i)];  // highest direction printed first
      if (c == '1')
        topology |= 1u << i;
      else if (c != '0')
        reader.fail("topology bits must be 0 or 1");
    }
  }
  int nv = 0;
  {
    auto ss = expect_key("vertices");
    if (!(ss >> nv) || nv < 1) reader.fail("invalid vertex count");
  }
  std::vector<Vec> coords(static_cast<std::size_t>(nv));
  for (int v = 0; v < nv; ++v) {
    if (!reader.next(line)) reader.fail("missing vertex coordinates");
    std::istringstream ss(line);
    for (int i = 0; i < dims; ++i)
      if (!(ss >> coords[static_cast<std::size_t>(v)][i])) reader.fail("invalid vertex coordinates");
  }
  int nc = 0;
  {
    auto ss = expect_key("cells");
    if (!(ss >> nc)) reader.fail("invalid cell count");
    if (nc < 1) reader.fail("empty cell list");
  }
  const int nv_cell = ref_polytope(dims, topology).num_vertices();
  std::vector<std::vector<int>> cells(static_cast<std::size_t>(nc));
  for (int c = 0; c < nc; ++c) {
    if (!reader.next(line)) reader.fail("missing cell connectivity");
    std::istringstream ss(line);
    for (int i = 0; i < nv_cell; ++i) {
      int v;
      if (!(ss >> v) || v < 1 || v > nv) reader.fail("invalid vertex id in cell");
      cells[static_cast<std::size_t>(c)].push_back(v - 1);
    }
  }
  std::vector<std::pair<int, std::vector<int>>> facet_sets;
  if (reader.next(line)) {
    std::istringstream ss(line);
    ss >> key;
    if (key != "boundary_facets") reader.fail("expected 'boundary_facets' or end of file");
    int nb = 0;
    if (!(ss >> nb) || nb < 0) reader.fail("invalid boundary facet count");
    const int nv_facet = dims == 1 ? 1 : -1;
    for (int b = 0; b < nb; ++b) {
      if (!reader.next(line)) reader.fail("missing boundary facet line");
      std::istringstream fs(line);
      int set_id;
      if (!(fs >> set_id)) reader.fail("invalid facet set id");
      std::vector<int> tuple;
      int v;
      while (fs >> v) {
        if (v < 1 || v > nv) reader.fail("invalid vertex id in boundary facet");
        tuple.push_back(v - 1);
      }
      if (tuple.empty() || (nv_facet > 0 && static_cast<int>(tuple.size()) != nv_facet))
        reader.fail("invalid boundary facet tuple");
      facet_sets.emplace_back(set_id, std::move(tuple));
    }
  }
  return from_cell_vertices(dims, topology, std::move(coords), std::move(cells), facet_sets);
}

void Triangulation::export_mesh(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open mesh file for writing: " + path);
  const int d = num_dims_;
  out << "dim " << d << "\n";
  out << "topology ";
  for (int i = d - 1; i >= 0; --i) out << ((topology() >> i) & 1u);
  out << "\n";
  out << "vertices " << num_vertices() << "\n";
  char buf[64];
  for (int v = 0; v < num_vertices(); ++v) {
    for (int i = 0; i < d; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", vertex(v)[i]);
      out << (i ? " " : "") << buf;
    }
    out << "\n";
  }
  out << "cells " << num_cells() << "\n";
  for (int c = 0; c < num_cells(); ++c) {
    const auto& cv = cell_vertices(c);
    for (std::size_t i = 0; i < cv.size(); ++i) out << (i ? " " : "") << cv[i] + 1;
    out << "\n";
  }
  std::vector<int> boundary;
  for (int v : facet_vefs())
    if (vef_at_boundary(v)) boundary.push_back(v);
  out << "boundary_facets " << boundary.size() << "\n";
  for (int v : boundary) {
    out << vef_set_id(v);
    for (int g : vef_vertices(v)) out << " " << g + 1;
    out << "\n";
  }
}

}  // namespace fekit

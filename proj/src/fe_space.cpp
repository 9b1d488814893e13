#include "fekit/fe_space.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace fekit {

FeFunction::FeFunction(const FeSpace& space) {
  free_blocks.resize(static_cast<std::size_t>(space.block_layout().num_blocks));
  for (int b = 0; b < space.block_layout().num_blocks; ++b)
    free_blocks[static_cast<std::size_t>(b)].assign(static_cast<std::size_t>(space.num_block_dofs(b)), 0.0);
  fixed.assign(static_cast<std::size_t>(space.num_fixed_dofs()), 0.0);
}

FeSpace::FeSpace(const Triangulation& triangulation, std::vector<FieldSpec> fields,
                 std::map<int, DirichletConditions> conditions)
    : triangulation_(&triangulation), fields_(std::move(fields)), conditions_(std::move(conditions)) {
  if (fields_.empty()) throw std::invalid_argument("fe space: at least one field required");
  const int d = triangulation_->num_dims();
  geometry_fe_ = std::make_unique<ReferenceFe>(
      make_reference_fe(d, triangulation_->topology(), FeType::lagrangian, 1, FieldType::scalar, true));

  std::set<int> cell_sets;
  for (int c = 0; c < triangulation_->num_cells(); ++c) cell_sets.insert(triangulation_->cell_set_id(c));

  field_cell_to_ref_fes_.resize(fields_.size());
  for (int f = 0; f < num_fields(); ++f) {
    const FieldSpec& spec = fields_[static_cast<std::size_t>(f)];
    std::map<int, int> set_to_catalog;
    for (int s : cell_sets) {
      const auto it = spec.by_cell_set.find(s);
      if (it != spec.by_cell_set.end())
        set_to_catalog[s] = catalog_index(it->second);
      else if (spec.default_fe)
        set_to_catalog[s] = catalog_index(*spec.default_fe);
      else
        throw std::invalid_argument("fe space: cell set " + std::to_string(s) +
                                    " has no reference FE for field " + std::to_string(f));
    }

    // Variable polynomial order within one conforming field is rejected:
    // shared-facet DOF identification would need constraints.
    int order = -1;
    for (const auto& [s, idx] : set_to_catalog) {
      const RefFeDesc& desc = catalog_descs_[static_cast<std::size_t>(idx)];
      if (desc.fe_type == FeType::void_fe) continue;
      if (!desc.conforming) continue;
      if (order < 0) order = desc.order;
      if (order != desc.order)
        throw std::invalid_argument("fe space: variable order across cells in a conforming field");
    }

    auto& per_cell = field_cell_to_ref_fes_[static_cast<std::size_t>(f)];
    per_cell.resize(static_cast<std::size_t>(triangulation_->num_cells()));
    for (int c = 0; c < triangulation_->num_cells(); ++c)
      per_cell[static_cast<std::size_t>(c)] = set_to_catalog.at(triangulation_->cell_set_id(c));
  }

  generate_global_dof_numbering(BlockLayout::monolithic(num_fields()));
}

int FeSpace::catalog_index(const RefFeDesc& desc) {
  for (std::size_t i = 0; i < catalog_descs_.size(); ++i)
    if (catalog_descs_[i] == desc) return static_cast<int>(i);
  catalog_descs_.push_back(desc);
  catalog_.push_back(std::make_unique<ReferenceFe>(make_reference_fe(
      triangulation_->num_dims(), triangulation_->topology(), desc.fe_type, desc.order,
      desc.field_type, desc.conforming)));
  return static_cast<int>(catalog_.size()) - 1;
}

const DirichletConditions::Entry* FeSpace::dirichlet_entry(int field, int set_id) const {
  const auto fit = conditions_.find(field);
  if (fit == conditions_.end()) return nullptr;
  const auto sit = fit->second.by_set.find(set_id);
  return sit == fit->second.by_set.end() ? nullptr : &sit->second;
}

bool FeSpace::dof_is_fixed(int field, int cell, int lid, int dof_in_cell) const {
  const int vef = triangulation_->vef_gid(cell, lid);
  if (!triangulation_->vef_at_boundary(vef)) return false;
  const DirichletConditions::Entry* entry = dirichlet_entry(field, triangulation_->vef_set_id(vef));
  if (!entry) return false;
  const int comp = ref_fe(field, cell).dof_component(dof_in_cell);
  return comp < static_cast<int>(entry->mask.size()) && entry->mask[static_cast<std::size_t>(comp)];
}

void FeSpace::number_field(int f) {
  const Triangulation& tri = *triangulation_;
  auto& ptr = ptr_dofs_x_fe_[static_cast<std::size_t>(f)];
  auto& lst = lst_dofs_gids_[static_cast<std::size_t>(f)];
  auto& sgn = dof_signs_[static_cast<std::size_t>(f)];

  ptr.assign(static_cast<std::size_t>(tri.num_cells()) + 1, 0);
  for (int c = 0; c < tri.num_cells(); ++c)
    ptr[static_cast<std::size_t>(c) + 1] = ptr[static_cast<std::size_t>(c)] + ref_fe(f, c).num_shape_functions();
  lst.assign(static_cast<std::size_t>(ptr.back()), 0);
  sgn.assign(static_cast<std::size_t>(ptr.back()), 1);

  std::vector<int> owner_cell(static_cast<std::size_t>(tri.num_vefs()), -1);
  std::vector<int> owner_lid(static_cast<std::size_t>(tri.num_vefs()), -1);
  int next_free = 0;

  for (int cell = 0; cell < tri.num_cells(); ++cell) {
    const ReferenceFe& fe = ref_fe(f, cell);
    if (fe.num_shape_functions() == 0) continue;
    const int base = ptr[static_cast<std::size_t>(cell)];
    const int cell_nf = fe.polytope().num_n_faces() - 1;

    // cell-interior DOFs first within each visit
    for (int a : fe.own_dofs_n_face(cell_nf)) lst[static_cast<std::size_t>(base + a)] = next_free++;

    // then the vefs; non-conforming FEs own everything at the cell
    for (int lid = 0; lid < tri.num_vefs_per_cell(); ++lid) {
      const auto& own = fe.own_dofs_n_face(lid);
      if (own.empty()) continue;
      const int vef = tri.vef_gid(cell, lid);
      const int perm_ncomp = fe.fe_type() == FeType::lagrangian ? fe.num_components() : 1;

      if (owner_cell[static_cast<std::size_t>(vef)] < 0) {
        owner_cell[static_cast<std::size_t>(vef)] = cell;
        owner_lid[static_cast<std::size_t>(vef)] = lid;
        for (int a : own) {
          if (dof_is_fixed(f, cell, lid, a))
            lst[static_cast<std::size_t>(base + a)] = -1 - (num_fixed_dofs_++);
          else
            lst[static_cast<std::size_t>(base + a)] = next_free++;
        }
      } else {
        const int ocell = owner_cell[static_cast<std::size_t>(vef)];
        const int olid = owner_lid[static_cast<std::size_t>(vef)];
        const ReferenceFe& ofe = ref_fe(f, ocell);
        const auto& oown = ofe.own_dofs_n_face(olid);
        const int perm = tri.permutation_index(ocell, olid, cell, lid);
        const int dim = fe.polytope().dim_of(lid);
        for (std::size_t i = 0; i < own.size(); ++i) {
          const int node = static_cast<int>(i) / perm_ncomp;
          const int comp = static_cast<int>(i) % perm_ncomp;
          const int src_node = fe.permute_dof_lid_n_face(perm, node, dim);
          const int src_dof = oown[static_cast<std::size_t>(src_node * perm_ncomp + comp)];
          lst[static_cast<std::size_t>(base + own[i])] =
              lst[static_cast<std::size_t>(ptr[static_cast<std::size_t>(ocell)] + src_dof)];
          // Raviart-Thomas facet moments are defined with the owner's
          // outward normal; the neighbour sees the opposite flux sign.
          if (fe.fe_type() == FeType::raviart_thomas && dim == tri.num_dims() - 1)
            sgn[static_cast<std::size_t>(base + own[i])] = -1;
        }
      }
    }
  }
  num_dofs_x_field_[static_cast<std::size_t>(f)] = next_free;
}

void FeSpace::generate_global_dof_numbering(const BlockLayout& layout) {
  if (static_cast<int>(layout.field_blocks.size()) != num_fields())
    throw std::invalid_argument("block layout: one block id per field required");
  for (int b : layout.field_blocks)
    if (b < 0 || b >= layout.num_blocks) throw std::invalid_argument("block layout: block id out of range");

  if (!numbering_generated_) {
    num_dofs_x_field_.assign(static_cast<std::size_t>(num_fields()), 0);
    ptr_dofs_x_fe_.resize(static_cast<std::size_t>(num_fields()));
    lst_dofs_gids_.resize(static_cast<std::size_t>(num_fields()));
    dof_signs_.resize(static_cast<std::size_t>(num_fields()));
    num_fixed_dofs_ = 0;
    for (int f = 0; f < num_fields(); ++f) number_field(f);
    numbering_generated_ = true;
  } else if (layout == layout_) {
    return;  // idempotent for an unchanged layout
  }

  layout_ = layout;
  block_dofs_.assign(static_cast<std::size_t>(layout.num_blocks), 0);
  field_offsets_.assign(static_cast<std::size_t>(num_fields()), 0);
  for (int b = 0; b < layout.num_blocks; ++b)
    for (int f = 0; f < num_fields(); ++f) {
      if (layout.field_blocks[static_cast<std::size_t>(f)] != b) continue;
      field_offsets_[static_cast<std::size_t>(f)] = block_dofs_[static_cast<std::size_t>(b)];
      block_dofs_[static_cast<std::size_t>(b)] += num_dofs_x_field_[static_cast<std::size_t>(f)];
    }
}

int FeSpace::num_free_dofs() const {
  int n = 0;
  for (int f = 0; f < num_fields(); ++f) n += num_free_dofs(f);
  return n;
}

std::span<const int> FeSpace::fe_dofs(int cell, int field) const {
  const auto& ptr = ptr_dofs_x_fe_[static_cast<std::size_t>(field)];
  const auto& lst = lst_dofs_gids_[static_cast<std::size_t>(field)];
  const int begin = ptr[static_cast<std::size_t>(cell)];
  return {lst.data() + begin, static_cast<std::size_t>(ptr[static_cast<std::size_t>(cell) + 1] - begin)};
}

std::span<const std::int8_t> FeSpace::fe_dof_signs(int cell, int field) const {
  const auto& ptr = ptr_dofs_x_fe_[static_cast<std::size_t>(field)];
  const auto& sgn = dof_signs_[static_cast<std::size_t>(field)];
  const int begin = ptr[static_cast<std::size_t>(cell)];
  return {sgn.data() + begin, static_cast<std::size_t>(ptr[static_cast<std::size_t>(cell) + 1] - begin)};
}

void FeSpace::gather_cell_values(const FeFunction& u, int cell, int field,
                                 std::vector<double>& out) const {
  const auto ids = fe_dofs(cell, field);
  const auto signs = fe_dof_signs(cell, field);
  const int block = block_of_field(field);
  const int offset = field_offset_in_block(field);
  out.resize(ids.size());
  for (std::size_t a = 0; a < ids.size(); ++a) {
    const double v = ids[a] >= 0 ? u.free_value(block, offset + ids[a]) : u.fixed[static_cast<std::size_t>(-1 - ids[a])];
    out[a] = signs[a] * v;
  }
}

Vec FeSpace::map_cell_point(int cell, const Vec& ref_point) const {
  const ShapeTable t = geometry_fe_->evaluate({ref_point});
  const auto coords = triangulation_->cell_node_coords(cell);
  Vec x;
  for (int a = 0; a < geometry_fe_->num_shape_functions(); ++a)
    for (int i = 0; i < triangulation_->num_dims(); ++i)
      x[i] += coords[static_cast<std::size_t>(a)][i] * t.value(a, 0, 0);
  return x;
}

namespace {

// Reference-space wrapper of a physical field: identity pull-back for
// Lagrangian moments, det(J) J^-1 (inverse Piola) for Raviart-Thomas.
std::function<void(const Vec&, double*)> reference_field(const FeSpace& space, int cell,
                                                         const ReferenceFe& fe,
                                                         const ReferenceFe& geo,
                                                         const std::vector<Vec>& coords,
                                                         const std::vector<ScalarFunc>& comps) {
  const int d = space.triangulation().num_dims();
  if (fe.fe_type() != FeType::raviart_thomas) {
    return [&space, cell, comps](const Vec& xhat, double* out) {
      const Vec x = space.map_cell_point(cell, xhat);
      for (std::size_t c = 0; c < comps.size(); ++c) out[c] = comps[c](x);
    };
  }
  return [&geo, coords, comps, d](const Vec& xhat, double* out) {
    const ShapeTable t = geo.evaluate({xhat});
    Vec x;
    Mat j;
    for (int a = 0; a < geo.num_shape_functions(); ++a)
      for (int i = 0; i < d; ++i) {
        x[i] += coords[static_cast<std::size_t>(a)][i] * t.value(a, 0, 0);
        for (int g = 0; g < d; ++g) j(i, g) += coords[static_cast<std::size_t>(a)][i] * t.gradient(a, 0, 0, g);
      }
    const double dj = det(j, d);
    const Mat inv = inverse(j, d, dj);
    Vec u;
    for (int c = 0; c < d; ++c) u[c] = comps[static_cast<std::size_t>(c)](x);
    for (int c = 0; c < d; ++c) {
      double s = 0.0;
      for (int g = 0; g < d; ++g) s += inv(c, g) * u[g];
      out[c] = dj * s;
    }
  };
}

}  // namespace

void FeSpace::interpolate(int field, const std::vector<ScalarFunc>& components, FeFunction& out,
                          bool include_fixed) const {
  const int block = block_of_field(field);
  const int offset = field_offset_in_block(field);
  for (int cell = 0; cell < triangulation_->num_cells(); ++cell) {
    const ReferenceFe& fe = ref_fe(field, cell);
    if (fe.num_shape_functions() == 0) continue;
    if (static_cast<int>(components.size()) != fe.num_components())
      throw std::invalid_argument("interpolate: one component function per FE component required");
    const auto coords = triangulation_->cell_node_coords(cell);
    const auto vals =
        fe.interpolate_local(reference_field(*this, cell, fe, *geometry_fe_, coords, components));
    const auto ids = fe_dofs(cell, field);
    const auto signs = fe_dof_signs(cell, field);
    for (std::size_t a = 0; a < ids.size(); ++a) {
      if (ids[a] >= 0)
        out.free_value(block, offset + ids[a]) = signs[a] * vals[a];
      else if (include_fixed)
        out.fixed[static_cast<std::size_t>(-1 - ids[a])] = signs[a] * vals[a];
    }
  }
}

void FeSpace::interpolate_dirichlet(FeFunction& out) const {
  for (int field = 0; field < num_fields(); ++field) {
    for (int cell = 0; cell < triangulation_->num_cells(); ++cell) {
      const ReferenceFe& fe = ref_fe(field, cell);
      if (fe.num_shape_functions() == 0) continue;
      const auto ids = fe_dofs(cell, field);
      const auto signs = fe_dof_signs(cell, field);

      // group the fixed DOFs of this cell by the set id of their vef
      std::map<int, std::vector<int>> by_set;
      for (std::size_t a = 0; a < ids.size(); ++a) {
        if (ids[a] >= 0) continue;
        const int lid = fe.dof_owner_n_face(static_cast<int>(a));
        const int set = triangulation_->vef_set_id(triangulation_->vef_gid(cell, lid));
        by_set[set].push_back(static_cast<int>(a));
      }
      if (by_set.empty()) continue;
      const auto coords = triangulation_->cell_node_coords(cell);
      for (const auto& [set, dofs] : by_set) {
        const DirichletConditions::Entry* entry = dirichlet_entry(field, set);
        if (!entry) continue;  // fixed via another set's mask sharing the vef
        std::vector<ScalarFunc> comps(static_cast<std::size_t>(fe.num_components()),
                                      [](const Vec&) { return 0.0; });
        for (int c = 0; c < fe.num_components() && c < static_cast<int>(entry->values.size()); ++c)
          if (entry->values[static_cast<std::size_t>(c)]) comps[static_cast<std::size_t>(c)] = entry->values[static_cast<std::size_t>(c)];
        const auto vals =
            fe.interpolate_local(reference_field(*this, cell, fe, *geometry_fe_, coords, comps));
        for (int a : dofs)
          out.fixed[static_cast<std::size_t>(-1 - ids[static_cast<std::size_t>(a)])] =
              signs[static_cast<std::size_t>(a)] * vals[static_cast<std::size_t>(a)];
      }
    }
  }
}

void FeSpace::setup_cell_integration(int degree) {
  cell_quadratures_.clear();
  cell_maps_.clear();
  cell_integrators_.clear();
  std::map<int, int> quad_of_degree;
  std::map<std::pair<int, int>, int> integrator_of;  // (quad idx, ref fe id)

  const int nc = triangulation_->num_cells();
  cell_quad_idx_.assign(static_cast<std::size_t>(nc), -1);
  cell_map_idx_.assign(static_cast<std::size_t>(nc), -1);
  cell_integrator_idx_.assign(static_cast<std::size_t>(num_fields()),
                              std::vector<int>(static_cast<std::size_t>(nc), -1));

  for (int cell = 0; cell < nc; ++cell) {
    int deg = degree;
    if (deg < 0) {
      deg = 2;  // geometry fallback for all-void cells
      for (int f = 0; f < num_fields(); ++f) {
        const ReferenceFe& fe = ref_fe(f, cell);
        if (fe.fe_type() == FeType::void_fe) continue;
        deg = std::max(deg, fe.fe_type() == FeType::raviart_thomas ? 2 * fe.order() + 2
                                                                   : fe.default_quadrature_degree());
      }
    }
    auto qit = quad_of_degree.find(deg);
    if (qit == quad_of_degree.end()) {
      cell_quadratures_.push_back(
          make_quadrature(triangulation_->num_dims(), triangulation_->topology(), deg));
      cell_maps_.emplace_back();
      cell_maps_.back().create(cell_quadratures_.back(), *geometry_fe_);
      qit = quad_of_degree.emplace(deg, static_cast<int>(cell_quadratures_.size()) - 1).first;
    }
    cell_quad_idx_[static_cast<std::size_t>(cell)] = qit->second;
    cell_map_idx_[static_cast<std::size_t>(cell)] = qit->second;

    for (int f = 0; f < num_fields(); ++f) {
      const auto key = std::make_pair(qit->second, ref_fe_id(f, cell));
      auto iit = integrator_of.find(key);
      if (iit == integrator_of.end()) {
        cell_integrators_.emplace_back();
        cell_integrators_.back().create(cell_quadratures_[static_cast<std::size_t>(qit->second)], ref_fe(f, cell));
        iit = integrator_of.emplace(key, static_cast<int>(cell_integrators_.size()) - 1).first;
      }
      cell_integrator_idx_[static_cast<std::size_t>(f)][static_cast<std::size_t>(cell)] = iit->second;
    }
  }
}

void FeSpace::update_cell(int cell) {
  CellMap& map = cell_map(cell);
  map.update(triangulation_->cell_node_coords(cell));
  for (int f = 0; f < num_fields(); ++f) cell_integrator(cell, f).update(map);
}

void FeSpace::setup_facet_integration(int degree) {
  const Triangulation& tri = *triangulation_;
  facets_.clear();
  facet_quadratures_.clear();
  facet_maps_.clear();
  facet_integrators_.clear();

  const int first_facet = tri.cell_polytope().first_n_face(tri.num_dims() - 1);
  for (int vef : tri.facet_vefs()) {
    FacetInfo info;
    info.vef = vef;
    const auto around = tri.cells_around(vef);
    info.cell_plus = around[0];
    info.lid_plus = tri.vef_lid_in_cell(info.cell_plus, vef) - first_facet;
    info.at_boundary = around.size() == 1;
    info.set_id = tri.vef_set_id(vef);
    if (!info.at_boundary) {
      info.cell_minus = around[1];
      info.lid_minus = tri.vef_lid_in_cell(info.cell_minus, vef) - first_facet;
      info.permutation_index =
          tri.permutation_index(info.cell_plus, info.lid_plus + first_facet, info.cell_minus,
                                info.lid_minus + first_facet);
    }
    facets_.push_back(info);
  }

  std::map<int, int> quad_of_degree;
  std::map<std::pair<int, int>, int> integrator_of;
  facet_quad_idx_.assign(facets_.size(), -1);
  facet_maps_idx_.assign(facets_.size(), -1);
  facet_integrator_idx_.assign(static_cast<std::size_t>(num_fields()),
                               std::vector<int>(facets_.size(), -1));

  for (std::size_t i = 0; i < facets_.size(); ++i) {
    const FacetInfo& info = facets_[i];
    int deg = degree;
    if (deg < 0) {
      deg = 2;
      for (int f = 0; f < num_fields(); ++f)
        for (int cell : {info.cell_plus, info.cell_minus}) {
          if (cell < 0) continue;
          const ReferenceFe& fe = ref_fe(f, cell);
          if (fe.fe_type() == FeType::void_fe) continue;
          deg = std::max(deg, fe.fe_type() == FeType::raviart_thomas ? 2 * fe.order() + 2
                                                                     : fe.default_quadrature_degree());
        }
    }
    auto qit = quad_of_degree.find(deg);
    if (qit == quad_of_degree.end()) {
      const int fd = tri.num_dims() - 1;
      const std::uint32_t ft =
          tri.cell_polytope().is_n_cube() ? (fd >= 1 ? (1u << fd) - 1u : 0u) : 0u;
      facet_quadratures_.push_back(make_quadrature(fd, ft, deg));
      facet_maps_.emplace_back();
      facet_maps_.back().create(facet_quadratures_.back(), *geometry_fe_);
      qit = quad_of_degree.emplace(deg, static_cast<int>(facet_quadratures_.size()) - 1).first;
    }
    facet_quad_idx_[i] = qit->second;
    facet_maps_idx_[i] = qit->second;

    for (int f = 0; f < num_fields(); ++f) {
      if (!info.at_boundary && ref_fe_id(f, info.cell_plus) != ref_fe_id(f, info.cell_minus))
        throw std::runtime_error("facet integration: differing reference FEs across a facet");
      const auto key = std::make_pair(qit->second, ref_fe_id(f, info.cell_plus));
      auto iit = integrator_of.find(key);
      if (iit == integrator_of.end()) {
        facet_integrators_.emplace_back();
        facet_integrators_.back().create(facet_quadratures_[static_cast<std::size_t>(qit->second)],
                                         ref_fe(f, info.cell_plus));
        iit = integrator_of.emplace(key, static_cast<int>(facet_integrators_.size()) - 1).first;
      }
      facet_integrator_idx_[static_cast<std::size_t>(f)][i] = iit->second;
    }
  }
}

void FeSpace::update_facet(int i) {
  const FacetInfo& info = facets_[static_cast<std::size_t>(i)];
  FacetMaps& fm = facet_maps(i);
  fm.update(triangulation_->vef_node_coords(info.vef),
            triangulation_->cell_node_coords(info.cell_plus),
            info.at_boundary ? std::vector<Vec>{} : triangulation_->cell_node_coords(info.cell_minus),
            info.lid_plus, info.lid_minus);
  for (int f = 0; f < num_fields(); ++f) {
    FacetIntegrator& fi = facet_integrator(i, f);
    if (info.at_boundary)
      fi.update_boundary(info.lid_plus, fm.cell_map_plus());
    else
      fi.update(info.lid_plus, info.lid_minus, info.permutation_index, fm.cell_map_plus(),
                fm.cell_map_minus());
  }
}

void CellFeFunction::update(FeSpace& space, int cell, int field, const FeFunction& u) {
  space.gather_cell_values(u, cell, field, dof_values_);
  const CellIntegrator& ci = space.cell_integrator(cell, field);
  const ShapeTable& phys = ci.physical();
  num_points_ = phys.num_points;
  num_components_ = phys.num_components;
  dim_ = phys.dim;
  values_.assign(static_cast<std::size_t>(num_points_) * num_components_, 0.0);
  gradients_.assign(static_cast<std::size_t>(num_points_) * num_components_ * dim_, 0.0);
  for (int a = 0; a < phys.num_functions; ++a) {
    const double ua = dof_values_[static_cast<std::size_t>(a)];
    if (ua == 0.0) continue;
    for (int p = 0; p < num_points_; ++p)
      for (int c = 0; c < num_components_; ++c) {
        values_[static_cast<std::size_t>(p) * num_components_ + c] += ua * phys.value(a, p, c);
        for (int i = 0; i < dim_; ++i)
          gradients_[(static_cast<std::size_t>(p) * num_components_ + c) * dim_ + i] +=
              ua * phys.gradient(a, p, c, i);
      }
  }
}

void FacetFeFunction::update(FeSpace& space, int facet, int field, const FeFunction& u) {
  const auto& info = space.facet(facet);
  const FacetIntegrator& fi = space.facet_integrator(facet, field);
  const ReferenceFe& fe = space.ref_fe(field, info.cell_plus);
  nc_ = fe.num_components();
  dim_ = space.triangulation().num_dims();
  const int np = space.facet_quadrature(facet).num_points();
  space.gather_cell_values(u, info.cell_plus, field, dofs_plus_);
  vplus_.assign(static_cast<std::size_t>(np) * nc_, 0.0);
  gplus_.assign(static_cast<std::size_t>(np) * nc_ * dim_, 0.0);
  vminus_.assign(static_cast<std::size_t>(np) * nc_, 0.0);
  gminus_.assign(static_cast<std::size_t>(np) * nc_ * dim_, 0.0);
  for (int a = 0; a < fi.num_functions(); ++a) {
    const double ua = dofs_plus_[static_cast<std::size_t>(a)];
    for (int p = 0; p < np; ++p)
      for (int c = 0; c < nc_; ++c) {
        vplus_[static_cast<std::size_t>(p) * nc_ + c] += ua * fi.value_plus(a, p, c);
        for (int i = 0; i < dim_; ++i)
          gplus_[(static_cast<std::size_t>(p) * nc_ + c) * dim_ + i] += ua * fi.grad_plus(a, p, i, c);
      }
  }
  if (info.at_boundary) return;
  space.gather_cell_values(u, info.cell_minus, field, dofs_minus_);
  for (int a = 0; a < fi.num_functions(); ++a) {
    const double ua = dofs_minus_[static_cast<std::size_t>(a)];
    for (int p = 0; p < np; ++p)
      for (int c = 0; c < nc_; ++c) {
        vminus_[static_cast<std::size_t>(p) * nc_ + c] += ua * fi.value_minus(a, p, c);
        for (int i = 0; i < dim_; ++i)
          gminus_[(static_cast<std::size_t>(p) * nc_ + c) * dim_ + i] += ua * fi.grad_minus(a, p, i, c);
      }
  }
}

}  // namespace fekit

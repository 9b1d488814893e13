#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "fekit/integration.hpp"
#include "fekit/reference_fe.hpp"
#include "fekit/triangulation.hpp"

namespace fekit {

using ScalarFunc = std::function<double(const Vec&)>;

struct RefFeDesc {
  FeType fe_type = FeType::lagrangian;
  int order = 1;
  FieldType field_type = FieldType::scalar;
  bool conforming = true;

  bool operator==(const RefFeDesc&) const = default;
  static RefFeDesc void_fe() { return {FeType::void_fe, 0, FieldType::scalar, true}; }
};

/// Reference FE assignment of one field: a default plus optional per-cell-set
/// overrides (a void FE removes the field from those cells). A cell set not
/// covered by either is an error.
struct FieldSpec {
  std::optional<RefFeDesc> default_fe;
  std::map<int, RefFeDesc> by_cell_set;

  static FieldSpec uniform(RefFeDesc d) {
    FieldSpec s;
    s.default_fe = d;
    return s;
  }
};

/// Strong Dirichlet data of one field: per vef set id, a component fix mask
/// and the boundary value function of each component. For FEs without a
/// DOF-component association (Raviart-Thomas) only the first mask entry is
/// honoured; the component functions then describe the vector field.
struct DirichletConditions {
  struct Entry {
    std::vector<bool> mask;
    std::vector<ScalarFunc> values;
  };
  std::map<int, Entry> by_set;
};

struct BlockLayout {
  int num_blocks = 1;
  std::vector<int> field_blocks;                 // field -> block
  std::vector<std::vector<bool>> field_coupling;  // empty = all coupled

  static BlockLayout monolithic(int num_fields) {
    BlockLayout l;
    l.num_blocks = 1;
    l.field_blocks.assign(static_cast<std::size_t>(num_fields), 0);
    return l;
  }
  bool coupled(int fi, int fj) const {
    return field_coupling.empty() ? true : field_coupling[static_cast<std::size_t>(fi)][static_cast<std::size_t>(fj)];
  }
  bool operator==(const BlockLayout&) const = default;
};

class FeSpace;

/// Nodal values of a global FE function: free DOFs per block plus the fixed
/// (strong-Dirichlet) DOFs in their own flat array.
struct FeFunction {
  std::vector<std::vector<double>> free_blocks;
  std::vector<double> fixed;

  explicit FeFunction(const FeSpace& space);
  double& free_value(int block, int row) { return free_blocks[static_cast<std::size_t>(block)][static_cast<std::size_t>(row)]; }
  double free_value(int block, int row) const {
    return free_blocks[static_cast<std::size_t>(block)][static_cast<std::size_t>(row)];
  }
};

/// Global Cartesian-product FE space: per-field reference FEs over cell sets,
/// free/fixed global DOF numbering under conformity or DG semantics, strong
/// Dirichlet bookkeeping, and the per-mesh caches of quadratures, maps and
/// integrators for cell and facet loops.
class FeSpace {
 public:
  FeSpace(const Triangulation& triangulation, std::vector<FieldSpec> fields,
          std::map<int, DirichletConditions> conditions = {});

  const Triangulation& triangulation() const { return *triangulation_; }
  int num_fields() const { return static_cast<int>(fields_.size()); }
  const ReferenceFe& ref_fe(int field, int cell) const {
    return *catalog_[static_cast<std::size_t>(field_cell_to_ref_fes_[static_cast<std::size_t>(field)][static_cast<std::size_t>(cell)])];
  }
  int ref_fe_id(int field, int cell) const {
    return field_cell_to_ref_fes_[static_cast<std::size_t>(field)][static_cast<std::size_t>(cell)];
  }

  /// Two-pass numbering (count then list) per field; free ids are dense per
  /// field, fixed ids dense and negative across fields. Idempotent for an
  /// unchanged layout.
  void generate_global_dof_numbering(const BlockLayout& layout);
  const BlockLayout& block_layout() const { return layout_; }

  int num_free_dofs(int field) const { return num_dofs_x_field_[static_cast<std::size_t>(field)]; }
  int num_free_dofs() const;
  int num_fixed_dofs() const { return num_fixed_dofs_; }
  int num_block_dofs(int block) const { return block_dofs_[static_cast<std::size_t>(block)]; }
  int block_of_field(int field) const { return layout_.field_blocks[static_cast<std::size_t>(field)]; }
  int field_offset_in_block(int field) const { return field_offsets_[static_cast<std::size_t>(field)]; }
  int block_row(int field, int id) const { return field_offset_in_block(field) + id; }

  /// Signed field-local DOF ids of a cell (>= 0 free, -1-g fixed) and the
  /// gather signs (Raviart-Thomas facet moments fetched from the neighbour
  /// flip sign; +1 everywhere else).
  std::span<const int> fe_dofs(int cell, int field) const;
  std::span<const std::int8_t> fe_dof_signs(int cell, int field) const;

  void gather_cell_values(const FeFunction& u, int cell, int field, std::vector<double>& out) const;

  /// Nodal interpolation of an analytic function into the free DOFs of a
  /// field (optionally also its fixed DOFs, for tests and error studies).
  void interpolate(int field, const std::vector<ScalarFunc>& components, FeFunction& out,
                   bool include_fixed = false) const;

  /// Boundary interpolation of the installed Dirichlet data into the fixed
  /// DOF values; free values are untouched.
  void interpolate_dirichlet(FeFunction& out) const;

  // --- cell integration -----------------------------------------------
  void setup_cell_integration(int degree = -1);
  bool cell_integration_ready() const { return !cell_quadratures_.empty(); }
  const Quadrature& cell_quadrature(int cell) const {
    return cell_quadratures_[static_cast<std::size_t>(cell_quad_idx_[static_cast<std::size_t>(cell)])];
  }
  CellMap& cell_map(int cell) {
    return cell_maps_[static_cast<std::size_t>(cell_map_idx_[static_cast<std::size_t>(cell)])];
  }
  CellIntegrator& cell_integrator(int cell, int field) {
    return cell_integrators_[static_cast<std::size_t>(
        cell_integrator_idx_[static_cast<std::size_t>(field)][static_cast<std::size_t>(cell)])];
  }
  /// Load the cell's geometry and update its map and all field integrators.
  void update_cell(int cell);

  int num_cached_cell_quadratures() const { return static_cast<int>(cell_quadratures_.size()); }
  int num_cached_cell_maps() const { return static_cast<int>(cell_maps_.size()); }
  int num_cached_cell_integrators() const { return static_cast<int>(cell_integrators_.size()); }

  // --- facet integration ----------------------------------------------
  struct FacetInfo {
    int vef = -1;
    int cell_plus = -1, cell_minus = -1;
    int lid_plus = -1, lid_minus = -1;        // facet-local ids
    int permutation_index = 0;
    int set_id = 0;
    bool at_boundary = true;
  };
  void setup_facet_integration(int degree = -1);
  int num_facets() const { return static_cast<int>(facets_.size()); }
  const FacetInfo& facet(int i) const { return facets_[static_cast<std::size_t>(i)]; }
  const Quadrature& facet_quadrature(int i) const {
    return facet_quadratures_[static_cast<std::size_t>(facet_quad_idx_[static_cast<std::size_t>(i)])];
  }
  FacetMaps& facet_maps(int i) {
    return facet_maps_[static_cast<std::size_t>(facet_maps_idx_[static_cast<std::size_t>(i)])];
  }
  FacetIntegrator& facet_integrator(int i, int field) {
    return facet_integrators_[static_cast<std::size_t>(
        facet_integrator_idx_[static_cast<std::size_t>(field)][static_cast<std::size_t>(i)])];
  }
  void update_facet(int i);

  /// Geometry helper: physical coordinates of a reference point of a cell.
  Vec map_cell_point(int cell, const Vec& ref_point) const;

 private:
  int catalog_index(const RefFeDesc& desc);
  void number_field(int field);
  const DirichletConditions::Entry* dirichlet_entry(int field, int set_id) const;
  bool dof_is_fixed(int field, int cell, int lid, int dof_in_cell) const;

  const Triangulation* triangulation_;
  std::vector<FieldSpec> fields_;
  std::map<int, DirichletConditions> conditions_;
  std::unique_ptr<ReferenceFe> geometry_fe_;

  std::vector<std::unique_ptr<ReferenceFe>> catalog_;
  std::vector<RefFeDesc> catalog_descs_;
  std::vector<std::vector<int>> field_cell_to_ref_fes_;

  bool numbering_generated_ = false;
  BlockLayout layout_;
  std::vector<int> num_dofs_x_field_;
  int num_fixed_dofs_ = 0;
  std::vector<int> block_dofs_;
  std::vector<int> field_offsets_;
  std::vector<std::vector<int>> ptr_dofs_x_fe_;   // per field, per cell offsets
  std::vector<std::vector<int>> lst_dofs_gids_;   // per field, signed local ids
  std::vector<std::vector<std::int8_t>> dof_signs_;

  std::vector<Quadrature> cell_quadratures_;
  std::vector<CellMap> cell_maps_;
  std::vector<CellIntegrator> cell_integrators_;
  std::vector<int> cell_quad_idx_, cell_map_idx_;
  std::vector<std::vector<int>> cell_integrator_idx_;

  std::vector<FacetInfo> facets_;
  std::vector<Quadrature> facet_quadratures_;
  std::vector<FacetMaps> facet_maps_;
  std::vector<FacetIntegrator> facet_integrators_;
  std::vector<int> facet_quad_idx_, facet_maps_idx_;
  std::vector<std::vector<int>> facet_integrator_idx_;
};

/// Restriction of a global FE function to one cell: gathered nodal values and
/// field values/gradients at the cell quadrature points. Per-worker scratch.
class CellFeFunction {
 public:
  void update(FeSpace& space, int cell, int field, const FeFunction& u);

  int num_points() const { return num_points_; }
  double value(int p, int c = 0) const { return values_[static_cast<std::size_t>(p) * num_components_ + c]; }
  double gradient(int p, int c, int i) const {
    return gradients_[(static_cast<std::size_t>(p) * num_components_ + c) * dim_ + i];
  }
  double gradient(int p, int i) const { return gradient(p, 0, i); }

 private:
  int num_points_ = 0, num_components_ = 1, dim_ = 0;
  std::vector<double> dof_values_;
  std::vector<double> values_, gradients_;
};

/// Facet counterpart: both sides evaluated at facet quadrature points, the
/// minus side already permuted to line up physically with the plus side.
class FacetFeFunction {
 public:
  void update(FeSpace& space, int facet, int field, const FeFunction& u);

  double value_plus(int p, int c = 0) const { return vplus_[static_cast<std::size_t>(p) * nc_ + c]; }
  double value_minus(int p, int c = 0) const { return vminus_[static_cast<std::size_t>(p) * nc_ + c]; }
  double grad_plus(int p, int c, int i) const { return gplus_[(static_cast<std::size_t>(p) * nc_ + c) * dim_ + i]; }
  double grad_minus(int p, int c, int i) const { return gminus_[(static_cast<std::size_t>(p) * nc_ + c) * dim_ + i]; }

 private:
  int nc_ = 1, dim_ = 0;
  std::vector<double> dofs_plus_, dofs_minus_;
  std::vector<double> vplus_, vminus_, gplus_, gminus_;
};

}  // namespace fekit

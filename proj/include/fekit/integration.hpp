#pragma once

#include <vector>

#include "fekit/quadrature.hpp"
#include "fekit/reference_fe.hpp"

namespace fekit {

/// Geometric map of one cell at a fixed set of reference points: Jacobians,
/// inverses, determinants and physical point coordinates. Created once,
/// updated once per cell with that cell's node coordinates (mutable per-cell
/// scratch, not shared between workers).
class CellMap {
 public:
  void create(const Quadrature& quadrature, const ReferenceFe& geometry_fe);
  void create_restricted_to_facet(const Quadrature& facet_quadrature, const ReferenceFe& geometry_fe,
                                  int facet_lid);

  void update(const std::vector<Vec>& node_coords);

  int num_points() const { return num_points_; }
  int dim() const { return dim_; }
  const Mat& jacobian(int p) const { return jacobian_[static_cast<std::size_t>(p)]; }
  const Mat& inv_jacobian(int p) const { return inv_jacobian_[static_cast<std::size_t>(p)]; }
  double det_jacobian(int p) const { return det_jacobian_[static_cast<std::size_t>(p)]; }
  const Vec& physical_point(int p) const { return physical_points_[static_cast<std::size_t>(p)]; }
  const std::vector<Mat>& jacobians() const { return jacobian_; }
  const std::vector<Mat>& inv_jacobians() const { return inv_jacobian_; }
  const std::vector<double>& det_jacobians() const { return det_jacobian_; }

  /// Physical coordinates of arbitrary reference points for the current cell.
  Vec map_point(const Vec& ref_point) const;

 private:
  void create_at_points(const std::vector<Vec>& points, const ReferenceFe& geometry_fe);

  int dim_ = 0;
  int num_points_ = 0;
  const ReferenceFe* geometry_fe_ = nullptr;
  ShapeTable geometry_table_;
  std::vector<Vec> node_coords_;
  std::vector<Mat> jacobian_, inv_jacobian_;
  std::vector<double> det_jacobian_;
  std::vector<Vec> physical_points_;
};

/// Geometry of one facet: the lower-dimensional facet map (measure factor
/// |J_F| and outward unit normals with respect to K+), plus one restricted
/// cell map per possible local facet id of each neighbour cell.
class FacetMaps {
 public:
  void create(const Quadrature& facet_quadrature, const ReferenceFe& geometry_fe);

  /// Update for one facet. For boundary facets pass an empty minus-side
  /// coordinate list and lid_minus = -1. The facet node coordinates must be
  /// in the first (plus) cell's ordering; normals point out of that cell.
  void update(const std::vector<Vec>& facet_node_coords, const std::vector<Vec>& cell_plus_coords,
              const std::vector<Vec>& cell_minus_coords, int lid_plus, int lid_minus);

  int num_points() const { return static_cast<int>(facet_quadrature_.points.size()); }
  double facet_det(int p) const { return facet_det_[static_cast<std::size_t>(p)]; }
  const Vec& normal_plus(int p) const { return normals_[static_cast<std::size_t>(p)]; }
  const Vec& physical_point(int p) const { return facet_points_[static_cast<std::size_t>(p)]; }
  double facet_measure() const;
  const Quadrature& quadrature() const { return facet_quadrature_; }

  const CellMap& cell_map_plus() const { return restricted_plus_[static_cast<std::size_t>(current_plus_)]; }
  const CellMap& cell_map_minus() const { return restricted_minus_[static_cast<std::size_t>(current_minus_)]; }

 private:
  Quadrature facet_quadrature_;
  int cell_dim_ = 0;
  ShapeTable facet_geo_table_;  // facet-dimensional geometry basis at quad points
  std::vector<CellMap> restricted_plus_, restricted_minus_;
  int current_plus_ = -1, current_minus_ = -1;
  std::vector<double> facet_det_;
  std::vector<Vec> normals_, facet_points_;
};

/// Shape values/gradients of one reference FE at cell quadrature points, in
/// reference and physical space. Per-worker mutable scratch.
class CellIntegrator {
 public:
  void create(const Quadrature& quadrature, const ReferenceFe& fe);
  void update(const CellMap& cell_map);

  const ReferenceFe& fe() const { return *fe_; }
  const ShapeTable& reference() const { return reference_; }
  const ShapeTable& physical() const { return physical_; }

  /// Point-major panels of the physical table for the contraction kernels
  /// (scalar FEs only; refreshed by update).
  const std::vector<double>& values_panel() const { return values_panel_; }
  const std::vector<double>& gradients_panel() const { return gradients_panel_; }

  /// Fetch-style accessors; out is resized to [n_shape x n_gp] entries of
  /// the appropriate rank. Divergences require a vector-valued FE.
  void get_values(std::vector<double>& out) const;
  void get_gradients(std::vector<double>& out) const;
  void get_divergences(std::vector<double>& out) const;

 private:
  const ReferenceFe* fe_ = nullptr;
  ShapeTable reference_, physical_;
  std::vector<double> values_panel_, gradients_panel_;
};

/// Facet counterpart of CellIntegrator: physical shape values/gradients of
/// both neighbour cells at the facet quadrature points, with the minus side
/// translated through the facet quadrature point permutation, so that
/// plus/minus accessors line up at the same physical point.
class FacetIntegrator {
 public:
  void create(const Quadrature& facet_quadrature, const ReferenceFe& fe);

  void update(int lid_plus, int lid_minus, int permutation_index, const CellMap& map_plus,
              const CellMap& map_minus);
  void update_boundary(int lid_plus, const CellMap& map_plus);

  int num_functions() const { return fe_->num_shape_functions(); }
  double value_plus(int f, int p, int c = 0) const { return physical_plus_.value(f, p, c); }
  double grad_plus(int f, int p, int i, int c = 0) const { return physical_plus_.gradient(f, p, c, i); }
  double value_minus(int f, int p, int c = 0) const {
    return physical_minus_.value(f, perm(p), c);
  }
  double grad_minus(int f, int p, int i, int c = 0) const {
    return physical_minus_.gradient(f, perm(p), c, i);
  }

  /// Quadrature point permutation for a permutation index: entry gp is the
  /// minus-side point index at the physical location of plus-side point gp.
  const std::vector<int>& qpoints_permutation(int permutation_index) const {
    return qpoints_perm_[static_cast<std::size_t>(permutation_index)];
  }

 private:
  int perm(int p) const { return qpoints_perm_[static_cast<std::size_t>(current_perm_)][static_cast<std::size_t>(p)]; }

  const ReferenceFe* fe_ = nullptr;
  std::vector<ShapeTable> reference_per_lid_;
  ShapeTable physical_plus_, physical_minus_;
  std::vector<std::vector<int>> qpoints_perm_;
  int current_perm_ = 0;
};

}  // namespace fekit

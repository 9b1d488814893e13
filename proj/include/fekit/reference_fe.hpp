#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "fekit/node_array.hpp"
#include "fekit/polynomial.hpp"
#include "fekit/polytope.hpp"
#include "fekit/quadrature.hpp"

namespace fekit {

enum class FeType { lagrangian, raviart_thomas, void_fe };
enum class FieldType { scalar, vector, tensor };

/// Shape function values and first derivatives at a point set, in the
/// reference or physical space. Layout: values [function][point][component],
/// gradients [function][point][component][dim].
struct ShapeTable {
  int num_functions = 0;
  int num_points = 0;
  int num_components = 0;
  int dim = 0;
  std::vector<double> values;
  std::vector<double> gradients;

  void resize(int nf, int np, int nc, int d);
  double& value(int f, int p, int c) {
    return values[(static_cast<std::size_t>(f) * num_points + p) * num_components + c];
  }
  double value(int f, int p, int c) const {
    return values[(static_cast<std::size_t>(f) * num_points + p) * num_components + c];
  }
  double& gradient(int f, int p, int c, int i) {
    return gradients[((static_cast<std::size_t>(f) * num_points + p) * num_components + c) * dim + i];
  }
  double gradient(int f, int p, int c, int i) const {
    return gradients[((static_cast<std::size_t>(f) * num_points + p) * num_components + c) * dim + i];
  }
  double divergence(int f, int p) const {
    double s = 0.0;
    for (int c = 0; c < num_components; ++c) s += gradient(f, p, c, c);
    return s;
  }

  /// Point-major panels for the contraction kernels (scalar tables only):
  /// values [point][function], gradients [point*dim + i][function].
  std::vector<double> values_panel() const;
  std::vector<double> gradients_panel() const;
};

/// Coordinate form of the linear n-face map: local coordinates on the
/// reference polytope of the n-face to base polytope coordinates.
Vec nface_coord_map(const Polytope& polytope, int nface_id, const Vec& local);

/// A reference finite element: a polytope, a local function space whose shape
/// functions are built from a pre-basis through a change of basis, and a dual
/// set of moments with their n-face ownership and permutation tables.
class ReferenceFe {
 public:
  const Polytope& polytope() const { return *polytope_; }
  int num_dims() const { return polytope_->num_dims(); }
  FeType fe_type() const { return fe_type_; }
  FieldType field_type() const { return field_type_; }
  int order() const { return order_; }
  bool conforming() const { return conforming_; }
  int num_shape_functions() const { return num_sf_; }
  int num_components() const { return num_components_; }

  const std::vector<int>& own_dofs_n_face(int nface_id) const {
    return own_dofs_n_face_[static_cast<std::size_t>(nface_id)];
  }
  const std::vector<int>& dofs_n_face(int nface_id) const {
    return dofs_n_face_[static_cast<std::size_t>(nface_id)];
  }

  /// Number of node functionals a dimension-m n-face owns (they are indexed
  /// node-major; vector components are handled by the caller).
  int num_own_nodes_n_face_dim(int m) const;
  int num_dof_permutations(int nface_dim) const;

  /// Local index of a node functional within an n-face as seen from the
  /// target cell, given its index as seen from the source cell. Identity for
  /// n-simplices (simplex meshes are reoriented instead).
  int permute_dof_lid_n_face(int permutation_index, int node_lid, int nface_dim) const;

  int default_quadrature_degree() const { return 2 * order_; }
  Quadrature create_quadrature(int degree = -1) const;
  Quadrature create_facet_quadrature(int degree = -1) const;

  /// Shape functions (change of basis applied) at reference points.
  ShapeTable evaluate(const std::vector<Vec>& points) const;
  ShapeTable create_interpolation(const Quadrature& quadrature) const;

  /// Shape functions at facet quadrature points mapped into the cell through
  /// the facet's n-face map.
  ShapeTable create_interpolation_on_facet(const Quadrature& facet_quadrature, int facet_lid) const;
  std::vector<Vec> facet_points_in_cell(const Quadrature& facet_quadrature, int facet_lid) const;

  /// Push a reference-space table to the physical space: identity map on
  /// values plus gradient pull-back for Lagrangian elements, contravariant
  /// Piola for Raviart-Thomas (gradients under the affine-map formula, which
  /// keeps div_phys = ref_div / det J exact).
  void apply_cell_map(const ShapeTable& reference, const std::vector<Mat>& jacobian,
                      const std::vector<Mat>& inv_jacobian, const std::vector<double>& det_jacobian,
                      ShapeTable& physical) const;

  /// Moments applied to a reference-space field: sigma_a(v). The callable
  /// fills one value per component at a reference point.
  std::vector<double> interpolate_local(
      const std::function<void(const Vec&, double*)>& field) const;

  /// sigma_a(phi_b); identity up to roundoff by construction.
  std::vector<double> moment_matrix_of_shape_functions() const;

  bool has_identity_change_of_basis() const { return change_of_basis_.empty(); }

  /// Component a Lagrangian node functional acts on; 0 for Raviart-Thomas
  /// (no component association, first-mask-entry rule).
  int dof_component(int a) const;
  /// Reference coordinates of a Lagrangian node functional.
  Vec dof_ref_coords(int a) const;

  /// Facet each Raviart-Thomas boundary moment belongs to, -1 for interior
  /// moments and for all Lagrangian DOFs.
  int dof_facet(int a) const;

  /// n-face that owns a DOF geometrically (the node's owner for Lagrangian
  /// FEs, the moment's facet or the cell for Raviart-Thomas).
  int dof_owner_n_face(int a) const;

 private:
  friend ReferenceFe make_reference_fe(int num_dims, std::uint32_t topology, FeType fe_type,
                                       int order, FieldType field_type, bool conforming);

  // One linear functional sigma_a, evaluated by weighted point sums:
  // sigma(v) = sum_p sum_c weight(p, c) * v_c(point p).
  struct Moment {
    std::vector<Vec> points;
    std::vector<double> weights;  // [point][component]
    int facet = -1;               // owning facet for RT boundary moments
  };

  void build_lagrangian();
  void build_raviart_thomas();
  void build_permutation_tables();
  ShapeTable prebasis_table(const std::vector<Vec>& points) const;
  std::vector<double> apply_moments(const ShapeTable& table_at_moment_points,
                                    const std::vector<int>& point_offsets) const;
  void build_change_of_basis_from_moments();

  const Polytope* polytope_ = nullptr;
  FeType fe_type_ = FeType::void_fe;
  FieldType field_type_ = FieldType::scalar;
  int order_ = 0;
  bool conforming_ = true;
  int num_sf_ = 0;
  int num_components_ = 1;

  std::unique_ptr<NodeArray> nodes_;  // Lagrangian node functionals
  std::vector<TensorProductSpace> rt_blocks_;
  std::unique_ptr<TensorProductSpace> tensor_space_;
  std::unique_ptr<TruncatedTensorProductSpace> truncated_space_;

  std::vector<double> change_of_basis_;  // row major [num_sf][num_prebasis]; empty = identity
  std::vector<Moment> moments_;

  std::vector<std::vector<int>> own_dofs_n_face_;
  std::vector<std::vector<int>> dofs_n_face_;

  // Permutation lookup per n-face dimension: [node_lid * num_perms + p].
  std::vector<std::vector<int>> perm_tables_;
  std::vector<int> perm_counts_;
  std::vector<int> own_nodes_per_dim_;
};

/// Factory covering the implemented reference FE kinds: Lagrangian on n-cubes
/// and n-simplices (scalar/vector/tensor), Raviart-Thomas on n-cubes
/// (vector), and the void FE. Unsupported combinations throw.
ReferenceFe make_reference_fe(int num_dims, std::uint32_t topology, FeType fe_type, int order,
                              FieldType field_type, bool conforming);

/// Phi = C^{-T} for an invertible moment matrix C_ab = sigma_a(psi_b); dense
/// LU with partial pivoting, row-norm-relative pivot threshold.
std::vector<double> build_change_of_basis(const std::vector<double>& c, int n);

}  // namespace fekit

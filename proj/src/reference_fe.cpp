#include "fekit/reference_fe.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fekit {

void ShapeTable::resize(int nf, int np, int nc, int d) {
  num_functions = nf;
  num_points = np;
  num_components = nc;
  dim = d;
  values.assign(static_cast<std::size_t>(nf) * np * nc, 0.0);
  gradients.assign(static_cast<std::size_t>(nf) * np * nc * d, 0.0);
}

std::vector<double> ShapeTable::values_panel() const {
  if (num_components != 1) throw std::logic_error("values_panel: scalar tables only");
  std::vector<double> panel(static_cast<std::size_t>(num_points) * num_functions);
  for (int p = 0; p < num_points; ++p)
    for (int f = 0; f < num_functions; ++f)
      panel[static_cast<std::size_t>(p) * num_functions + f] = value(f, p, 0);
  return panel;
}

std::vector<double> ShapeTable::gradients_panel() const {
  if (num_components != 1) throw std::logic_error("gradients_panel: scalar tables only");
  std::vector<double> panel(static_cast<std::size_t>(num_points) * dim * num_functions);
  for (int p = 0; p < num_points; ++p)
    for (int i = 0; i < dim; ++i)
      for (int f = 0; f < num_functions; ++f)
        panel[(static_cast<std::size_t>(p) * dim + i) * num_functions + f] = gradient(f, p, 0, i);
  return panel;
}

Vec nface_coord_map(const Polytope& polytope, int nface_id, const Vec& local) {
  const NFace& f = polytope.n_face(nface_id);
  const auto dirs = polytope.extrusion_dirs(f);
  const std::uint32_t tr = polytope.restricted_topology(f);
  double pyramid_sum = 0.0;
  for (std::size_t s = 0; s < dirs.size(); ++s)
    if (!(tr & (1u << s))) pyramid_sum += local[static_cast<int>(s)];
  Vec x;
  for (int i = 0; i < polytope.num_dims(); ++i)
    if (f.anchor & (1u << i)) x[i] = 1.0 - pyramid_sum;
  for (std::size_t s = 0; s < dirs.size(); ++s) x[dirs[s]] += local[static_cast<int>(s)];
  return x;
}

std::vector<double> build_change_of_basis(const std::vector<double>& c, int n) {
  if (static_cast<int>(c.size()) != n * n)
    throw std::invalid_argument("change of basis: moment matrix must be square");
  std::vector<double> lu = c;
  std::vector<int> piv(static_cast<std::size_t>(n));
  double max_row_norm = 0.0;
  for (int r = 0; r < n; ++r) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += std::abs(lu[static_cast<std::size_t>(r) * n + j]);
    max_row_norm = std::max(max_row_norm, s);
  }
  const double tol = 1e-12 * max_row_norm;

  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int r = k + 1; r < n; ++r)
      if (std::abs(lu[static_cast<std::size_t>(r) * n + k]) > std::abs(lu[static_cast<std::size_t>(p) * n + k])) p = r;
    piv[static_cast<std::size_t>(k)] = p;
    if (p != k)
      for (int j = 0; j < n; ++j)
        std::swap(lu[static_cast<std::size_t>(k) * n + j], lu[static_cast<std::size_t>(p) * n + j]);
    const double pivot = lu[static_cast<std::size_t>(k) * n + k];
    if (std::abs(pivot) < tol)
      throw std::runtime_error("change of basis: singular moment matrix (invalid moment/pre-basis pairing)");
    for (int r = k + 1; r < n; ++r) {
      const double m = lu[static_cast<std::size_t>(r) * n + k] / pivot;
      lu[static_cast<std::size_t>(r) * n + k] = m;
      for (int j = k + 1; j < n; ++j) lu[static_cast<std::size_t>(r) * n + j] -= m * lu[static_cast<std::size_t>(k) * n + j];
    }
  }

  // Phi = C^-T: solve C^T x = e_a, i.e. Phi[a][:] is the a-th column of C^-1.
  std::vector<double> phi(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> col(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    std::fill(col.begin(), col.end(), 0.0);
    col[static_cast<std::size_t>(a)] = 1.0;
    // multipliers are stored in the final row order: permute first, then solve
    for (int k = 0; k < n; ++k)
      std::swap(col[static_cast<std::size_t>(k)], col[static_cast<std::size_t>(piv[static_cast<std::size_t>(k)])]);
    for (int k = 0; k < n; ++k)
      for (int r = k + 1; r < n; ++r) col[static_cast<std::size_t>(r)] -= lu[static_cast<std::size_t>(r) * n + k] * col[static_cast<std::size_t>(k)];
    for (int k = n - 1; k >= 0; --k) {
      for (int j = k + 1; j < n; ++j) col[static_cast<std::size_t>(k)] -= lu[static_cast<std::size_t>(k) * n + j] * col[static_cast<std::size_t>(j)];
      col[static_cast<std::size_t>(k)] /= lu[static_cast<std::size_t>(k) * n + k];
    }
    // col = C^-1 e_a is the a-th column of C^-1, i.e. row a of C^-T.
    for (int b = 0; b < n; ++b) phi[static_cast<std::size_t>(a) * n + b] = col[static_cast<std::size_t>(b)];
  }
  return phi;
}

namespace {

int components_of(FieldType field, int dims) {
  switch (field) {
    case FieldType::scalar:
      return 1;
    case FieldType::vector:
      return dims;
    case FieldType::tensor:
      return dims * dims;
  }
  return 1;
}

ShapeTable expand_components(const BasisEvaluation& scalar, int ncomp) {
  ShapeTable out;
  out.resize(scalar.num_functions * ncomp, scalar.num_points, ncomp, scalar.dim);
  for (int n = 0; n < scalar.num_functions; ++n)
    for (int c = 0; c < ncomp; ++c) {
      const int f = n * ncomp + c;
      for (int p = 0; p < scalar.num_points; ++p) {
        out.value(f, p, c) = scalar.value(n, p);
        for (int i = 0; i < scalar.dim; ++i) out.gradient(f, p, c, i) = scalar.gradient(n, p, i);
      }
    }
  return out;
}

}  // namespace

int ReferenceFe::num_own_nodes_n_face_dim(int m) const {
  return own_nodes_per_dim_[static_cast<std::size_t>(m)];
}

int ReferenceFe::num_dof_permutations(int nface_dim) const {
  if (perm_counts_.empty()) return 1;
  return perm_counts_[static_cast<std::size_t>(nface_dim)];
}

int ReferenceFe::permute_dof_lid_n_face(int permutation_index, int node_lid, int nface_dim) const {
  if (permutation_index == 0) return node_lid;
  if (perm_tables_.empty() || perm_tables_[static_cast<std::size_t>(nface_dim)].empty()) {
    // n-simplex elements rely on mesh reorientation: always the identity.
    if (permutation_index >= num_dof_permutations(nface_dim))
      throw std::out_of_range("permute_dof_lid_n_face: permutation index out of range");
    return node_lid;
  }
  const int np = perm_counts_[static_cast<std::size_t>(nface_dim)];
  if (permutation_index < 0 || permutation_index >= np)
    throw std::out_of_range("permute_dof_lid_n_face: permutation index out of range");
  const auto& table = perm_tables_[static_cast<std::size_t>(nface_dim)];
  if (node_lid < 0 || node_lid * np >= static_cast<int>(table.size()))
    throw std::out_of_range("permute_dof_lid_n_face: node lid out of range");
  return table[static_cast<std::size_t>(node_lid) * np + permutation_index];
}

Quadrature ReferenceFe::create_quadrature(int degree) const {
  if (degree < 0) degree = fe_type_ == FeType::raviart_thomas ? 2 * order_ + 2 : default_quadrature_degree();
  return make_quadrature(num_dims(), polytope_->topology(), degree);
}

Quadrature ReferenceFe::create_facet_quadrature(int degree) const {
  if (degree < 0) degree = fe_type_ == FeType::raviart_thomas ? 2 * order_ + 2 : default_quadrature_degree();
  const int fd = num_dims() - 1;
  const std::uint32_t ft = polytope_->is_n_cube() ? (fd >= 1 ? (1u << fd) - 1u : 0u) : 0u;
  return make_quadrature(fd, ft, degree);
}

std::vector<Vec> ReferenceFe::facet_points_in_cell(const Quadrature& facet_quadrature, int facet_lid) const {
  const int nf = polytope_->first_n_face(num_dims() - 1) + facet_lid;
  std::vector<Vec> out;
  out.reserve(facet_quadrature.points.size());
  for (const Vec& u : facet_quadrature.points) out.push_back(nface_coord_map(*polytope_, nf, u));
  return out;
}

ShapeTable ReferenceFe::prebasis_table(const std::vector<Vec>& points) const {
  const int np = static_cast<int>(points.size());
  if (fe_type_ == FeType::raviart_thomas) {
    int n_pre = 0;
    for (const auto& b : rt_blocks_) n_pre += b.dimension();
    ShapeTable out;
    out.resize(n_pre, np, num_components_, num_dims());
    int off = 0;
    for (int c = 0; c < static_cast<int>(rt_blocks_.size()); ++c) {
      const BasisEvaluation ev = rt_blocks_[static_cast<std::size_t>(c)].evaluate(points);
      for (int j = 0; j < ev.num_functions; ++j)
        for (int p = 0; p < np; ++p) {
          out.value(off + j, p, c) = ev.value(j, p);
          for (int i = 0; i < num_dims(); ++i) out.gradient(off + j, p, c, i) = ev.gradient(j, p, i);
        }
      off += ev.num_functions;
    }
    return out;
  }
  throw std::logic_error("prebasis_table: only used for Raviart-Thomas");
}

ShapeTable ReferenceFe::evaluate(const std::vector<Vec>& points) const {
  const int np = static_cast<int>(points.size());
  if (fe_type_ == FeType::void_fe) {
    ShapeTable out;
    out.resize(0, np, 1, num_dims());
    return out;
  }
  if (fe_type_ == FeType::lagrangian) {
    BasisEvaluation scalar = tensor_space_ ? tensor_space_->evaluate(points) : truncated_space_->evaluate(points);
    if (!change_of_basis_.empty()) {
      // Scalar change of basis, applied before component expansion.
      const int n = scalar.num_functions;
      BasisEvaluation mixed;
      mixed.resize(n, np, scalar.dim);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const double phi = change_of_basis_[static_cast<std::size_t>(a) * n + b];
          if (phi == 0.0) continue;
          for (int p = 0; p < np; ++p) {
            mixed.value(a, p) += phi * scalar.value(b, p);
            for (int i = 0; i < scalar.dim; ++i) mixed.gradient(a, p, i) += phi * scalar.gradient(b, p, i);
          }
        }
      scalar = std::move(mixed);
    }
    return expand_components(scalar, num_components_);
  }

  // Raviart-Thomas: full change of basis over the vector-valued pre-basis.
  const ShapeTable pre = prebasis_table(points);
  ShapeTable out;
  out.resize(num_sf_, np, num_components_, num_dims());
  for (int a = 0; a < num_sf_; ++a)
    for (int b = 0; b < pre.num_functions; ++b) {
      const double phi = change_of_basis_[static_cast<std::size_t>(a) * pre.num_functions + b];
      if (phi == 0.0) continue;
      for (int p = 0; p < np; ++p)
        for (int c = 0; c < num_components_; ++c) {
          out.value(a, p, c) += phi * pre.value(b, p, c);
          for (int i = 0; i < num_dims(); ++i)
            out.gradient(a, p, c, i) += phi * pre.gradient(b, p, c, i);
        }
    }
  return out;
}

ShapeTable ReferenceFe::create_interpolation(const Quadrature& quadrature) const {
  if (quadrature.num_dims != num_dims())
    throw std::invalid_argument("create_interpolation: quadrature dimension mismatch");
  return evaluate(quadrature.points);
}

ShapeTable ReferenceFe::create_interpolation_on_facet(const Quadrature& facet_quadrature,
                                                      int facet_lid) const {
  if (facet_quadrature.num_dims != num_dims() - 1)
    throw std::invalid_argument("create_interpolation_on_facet: quadrature dimension mismatch");
  return evaluate(facet_points_in_cell(facet_quadrature, facet_lid));
}

void ReferenceFe::apply_cell_map(const ShapeTable& reference, const std::vector<Mat>& jacobian,
                                 const std::vector<Mat>& inv_jacobian,
                                 const std::vector<double>& det_jacobian, ShapeTable& physical) const {
  const int d = num_dims();
  const int np = reference.num_points;
  physical.resize(reference.num_functions, np, reference.num_components, d);
  if (fe_type_ == FeType::void_fe) return;

  if (fe_type_ == FeType::lagrangian) {
    physical.values = reference.values;
    for (int f = 0; f < reference.num_functions; ++f)
      for (int p = 0; p < np; ++p)
        for (int c = 0; c < reference.num_components; ++c)
          for (int i = 0; i < d; ++i) {
            double g = 0.0;
            for (int j = 0; j < d; ++j)
              g += reference.gradient(f, p, c, j) * inv_jacobian[static_cast<std::size_t>(p)](j, i);
            physical.gradient(f, p, c, i) = g;
          }
    return;
  }

  // Contravariant Piola: v = (1/det J) J vhat. Gradients use the affine-map
  // formula (1/det J) J Ghat J^-1, whose trace gives the exact Piola
  // divergence identity div v = ref_div / det J.
  for (int f = 0; f < reference.num_functions; ++f)
    for (int p = 0; p < np; ++p) {
      const Mat& jac = jacobian[static_cast<std::size_t>(p)];
      const Mat& inv = inv_jacobian[static_cast<std::size_t>(p)];
      const double idet = 1.0 / det_jacobian[static_cast<std::size_t>(p)];
      for (int c = 0; c < d; ++c) {
        double v = 0.0;
        for (int j = 0; j < d; ++j) v += jac(c, j) * reference.value(f, p, j);
        physical.value(f, p, c) = idet * v;
        for (int i = 0; i < d; ++i) {
          double g = 0.0;
          for (int j = 0; j < d; ++j)
            for (int l = 0; l < d; ++l) g += jac(c, j) * reference.gradient(f, p, j, l) * inv(l, i);
          physical.gradient(f, p, c, i) = idet * g;
        }
      }
    }
}

std::vector<double> ReferenceFe::interpolate_local(
    const std::function<void(const Vec&, double*)>& field) const {
  std::vector<double> dof_values(static_cast<std::size_t>(num_sf_), 0.0);
  std::vector<double> comps(static_cast<std::size_t>(num_components_));
  for (int a = 0; a < num_sf_; ++a) {
    const Moment& m = moments_[static_cast<std::size_t>(a)];
    double s = 0.0;
    for (std::size_t p = 0; p < m.points.size(); ++p) {
      field(m.points[p], comps.data());
      for (int c = 0; c < num_components_; ++c) s += m.weights[p * num_components_ + c] * comps[static_cast<std::size_t>(c)];
    }
    dof_values[static_cast<std::size_t>(a)] = s;
  }
  return dof_values;
}

std::vector<double> ReferenceFe::moment_matrix_of_shape_functions() const {
  std::vector<double> out(static_cast<std::size_t>(num_sf_) * num_sf_, 0.0);
  // Gather all moment points, evaluate every shape function there once.
  std::vector<Vec> pts;
  std::vector<int> offsets;
  for (const Moment& m : moments_) {
    offsets.push_back(static_cast<int>(pts.size()));
    pts.insert(pts.end(), m.points.begin(), m.points.end());
  }
  if (pts.empty()) return out;
  const ShapeTable table = evaluate(pts);
  for (int a = 0; a < num_sf_; ++a) {
    const Moment& m = moments_[static_cast<std::size_t>(a)];
    for (int b = 0; b < num_sf_; ++b) {
      double s = 0.0;
      for (std::size_t p = 0; p < m.points.size(); ++p)
        for (int c = 0; c < num_components_; ++c)
          s += m.weights[p * num_components_ + c] *
               table.value(b, offsets[static_cast<std::size_t>(a)] + static_cast<int>(p), c);
      out[static_cast<std::size_t>(a) * num_sf_ + b] = s;
    }
  }
  return out;
}

int ReferenceFe::dof_component(int a) const {
  if (fe_type_ == FeType::lagrangian) return a % num_components_;
  return 0;
}

Vec ReferenceFe::dof_ref_coords(int a) const {
  if (fe_type_ != FeType::lagrangian)
    throw std::logic_error("dof_ref_coords: only Lagrangian node functionals have coordinates");
  return nodes_->ref_coords(a / num_components_);
}

int ReferenceFe::dof_facet(int a) const { return moments_[static_cast<std::size_t>(a)].facet; }

int ReferenceFe::dof_owner_n_face(int a) const {
  if (fe_type_ == FeType::lagrangian) return nodes_->owner_n_face(a / num_components_);
  if (fe_type_ == FeType::raviart_thomas) {
    const int facet = dof_facet(a);
    if (facet >= 0) return polytope_->first_n_face(num_dims() - 1) + facet;
    return polytope_->num_n_faces() - 1;
  }
  return -1;
}

void ReferenceFe::build_lagrangian() {
  const int d = num_dims();
  nodes_ = std::make_unique<NodeArray>(*polytope_, std::vector<int>(static_cast<std::size_t>(d), order_));
  num_components_ = components_of(field_type_, d);
  const int n_nodes = nodes_->num_nodes();
  num_sf_ = n_nodes * num_components_;

  if (polytope_->is_n_cube() || d == 1) {
    std::vector<PolynomialBasis1D> bases;
    for (int i = 0; i < d; ++i) bases.push_back(lagrange_basis_equidistant(order_));
    tensor_space_ = std::make_unique<TensorProductSpace>(d, std::move(bases));
  } else if (polytope_->is_n_simplex()) {
    truncated_space_ = std::make_unique<TruncatedTensorProductSpace>(d, order_);
  } else {
    throw std::invalid_argument("lagrangian reference FE: unsupported topology");
  }

  // Nodal moments, node-major and component-minor.
  for (int n = 0; n < n_nodes; ++n)
    for (int c = 0; c < num_components_; ++c) {
      Moment m;
      m.points.push_back(nodes_->ref_coords(n));
      m.weights.assign(static_cast<std::size_t>(num_components_), 0.0);
      m.weights[static_cast<std::size_t>(c)] = 1.0;
      moments_.push_back(std::move(m));
    }

  if (truncated_space_) {
    // Nodal Vandermonde of the monomial pre-basis; scalar change of basis.
    std::vector<Vec> pts;
    for (int n = 0; n < n_nodes; ++n) pts.push_back(nodes_->ref_coords(n));
    const BasisEvaluation pre = truncated_space_->evaluate(pts);
    std::vector<double> c(static_cast<std::size_t>(n_nodes) * n_nodes);
    for (int a = 0; a < n_nodes; ++a)
      for (int b = 0; b < n_nodes; ++b) c[static_cast<std::size_t>(a) * n_nodes + b] = pre.value(b, a);
    change_of_basis_ = build_change_of_basis(c, n_nodes);
  }

  own_dofs_n_face_.resize(static_cast<std::size_t>(polytope_->num_n_faces()));
  dofs_n_face_.resize(static_cast<std::size_t>(polytope_->num_n_faces()));
  for (int nf = 0; nf < polytope_->num_n_faces(); ++nf) {
    for (int node : nodes_->nodes_on_n_face(nf, /*closed=*/true))
      for (int c = 0; c < num_components_; ++c)
        dofs_n_face_[static_cast<std::size_t>(nf)].push_back(node * num_components_ + c);
    if (conforming_) {
      for (int node : nodes_->nodes_on_n_face(nf, /*closed=*/false))
        for (int c = 0; c < num_components_; ++c)
          own_dofs_n_face_[static_cast<std::size_t>(nf)].push_back(node * num_components_ + c);
    }
  }
  if (!conforming_) {
    auto& cell_own = own_dofs_n_face_.back();
    for (int a = 0; a < num_sf_; ++a) cell_own.push_back(a);
  }

  own_nodes_per_dim_.assign(static_cast<std::size_t>(d) + 1, 0);
  for (int m = 0; m <= d; ++m) {
    const int nf = polytope_->first_n_face(m);
    own_nodes_per_dim_[static_cast<std::size_t>(m)] =
        static_cast<int>(own_dofs_n_face_[static_cast<std::size_t>(nf)].size()) / num_components_;
  }
}

void ReferenceFe::build_raviart_thomas() {
  const int d = num_dims();
  if (!polytope_->is_n_cube())
    throw std::invalid_argument("raviart_thomas reference FE: requires an n-cube topology");
  if (d < 2) throw std::invalid_argument("raviart_thomas reference FE: requires dimension >= 2");
  field_type_ = FieldType::vector;
  num_components_ = d;
  const int k = order_;

  for (int c = 0; c < d; ++c) {
    std::vector<PolynomialBasis1D> bases;
    for (int i = 0; i < d; ++i) bases.push_back(lagrange_basis_equidistant(i == c ? k + 1 : k));
    rt_blocks_.emplace_back(d, std::move(bases));
  }
  int n_pre = 0;
  for (const auto& b : rt_blocks_) n_pre += b.dimension();

  // Boundary moments: mean normal flux against the facet tensor space Q_k,
  // one group per facet; the reference facet has unit measure. Interior
  // moments (k >= 1) test against Q_(k-1 in direction c, k elsewhere).
  const Quadrature fq = make_quadrature(d - 1, (d - 1 >= 1) ? (1u << (d - 1)) - 1u : 0u, 2 * k + 2);
  std::vector<PolynomialBasis1D> fb;
  for (int i = 0; i < d - 1; ++i) fb.push_back(lagrange_basis_equidistant(k));
  const TensorProductSpace facet_test(d - 1, std::move(fb));
  const BasisEvaluation ftv = facet_test.evaluate(fq.points);

  const int first_facet = polytope_->first_n_face(d - 1);
  own_dofs_n_face_.resize(static_cast<std::size_t>(polytope_->num_n_faces()));
  dofs_n_face_.resize(static_cast<std::size_t>(polytope_->num_n_faces()));

  for (int fl = 0; fl < polytope_->num_facets(); ++fl) {
    const int nf = first_facet + fl;
    const NFace& face = polytope_->n_face(nf);
    int normal_dir = -1;
    for (int i = 0; i < d; ++i)
      if (!(face.extrusion & (1u << i))) normal_dir = i;
    const double sign = (face.anchor & (1u << normal_dir)) ? 1.0 : -1.0;

    std::vector<Vec> pts;
    for (const Vec& u : fq.points) pts.push_back(nface_coord_map(*polytope_, nf, u));
    for (int j = 0; j < ftv.num_functions; ++j) {
      Moment m;
      m.facet = fl;
      m.points = pts;
      m.weights.assign(pts.size() * static_cast<std::size_t>(d), 0.0);
      for (std::size_t p = 0; p < pts.size(); ++p)
        m.weights[p * static_cast<std::size_t>(d) + static_cast<std::size_t>(normal_dir)] =
            sign * ftv.value(j, static_cast<int>(p)) * fq.weights[p];
      const int dof = static_cast<int>(moments_.size());
      moments_.push_back(std::move(m));
      if (conforming_) own_dofs_n_face_[static_cast<std::size_t>(nf)].push_back(dof);
      dofs_n_face_[static_cast<std::size_t>(nf)].push_back(dof);
    }
  }

  if (k >= 1) {
    const Quadrature cq = make_quadrature(d, (1u << d) - 1u, 2 * k + 2);
    for (int c = 0; c < d; ++c) {
      std::vector<PolynomialBasis1D> tb;
      for (int i = 0; i < d; ++i) tb.push_back(lagrange_basis_equidistant(i == c ? k - 1 : k));
      const TensorProductSpace interior_test(d, std::move(tb));
      const BasisEvaluation itv = interior_test.evaluate(cq.points);
      for (int j = 0; j < itv.num_functions; ++j) {
        Moment m;
        m.points = cq.points;
        m.weights.assign(cq.points.size() * static_cast<std::size_t>(d), 0.0);
        for (std::size_t p = 0; p < cq.points.size(); ++p)
          m.weights[p * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)] =
              itv.value(j, static_cast<int>(p)) * cq.weights[p];
        moments_.push_back(std::move(m));
      }
    }
  }

  num_sf_ = static_cast<int>(moments_.size());
  if (num_sf_ != n_pre)
    throw std::logic_error("raviart_thomas reference FE: moment count does not match the pre-basis");

  const int cell_nf = polytope_->num_n_faces() - 1;
  const int first_interior = polytope_->num_facets() * ftv.num_functions;
  auto& cell_own = own_dofs_n_face_[static_cast<std::size_t>(cell_nf)];
  if (conforming_) {
    for (int a = first_interior; a < num_sf_; ++a) cell_own.push_back(a);
  } else {
    for (int a = 0; a < num_sf_; ++a) cell_own.push_back(a);
  }
  for (int a = 0; a < num_sf_; ++a) dofs_n_face_[static_cast<std::size_t>(cell_nf)].push_back(a);

  own_nodes_per_dim_.assign(static_cast<std::size_t>(d) + 1, 0);
  if (conforming_) own_nodes_per_dim_[static_cast<std::size_t>(d - 1)] = ftv.num_functions;

  // C_ab = sigma_a(psi_b) over the concatenated pre-basis, then Phi = C^-T.
  std::vector<Vec> pts;
  std::vector<int> offsets;
  for (const Moment& m : moments_) {
    offsets.push_back(static_cast<int>(pts.size()));
    pts.insert(pts.end(), m.points.begin(), m.points.end());
  }
  const ShapeTable pre = prebasis_table(pts);
  std::vector<double> cmat(static_cast<std::size_t>(num_sf_) * n_pre, 0.0);
  for (int a = 0; a < num_sf_; ++a) {
    const Moment& m = moments_[static_cast<std::size_t>(a)];
    for (int b = 0; b < n_pre; ++b) {
      double s = 0.0;
      for (std::size_t p = 0; p < m.points.size(); ++p)
        for (int c = 0; c < d; ++c)
          s += m.weights[p * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)] *
               pre.value(b, offsets[static_cast<std::size_t>(a)] + static_cast<int>(p), c);
      cmat[static_cast<std::size_t>(a) * n_pre + b] = s;
    }
  }
  change_of_basis_ = build_change_of_basis(cmat, num_sf_);
}

void ReferenceFe::build_permutation_tables() {
  const int d = num_dims();
  perm_tables_.assign(static_cast<std::size_t>(d) + 1, {});
  perm_counts_.assign(static_cast<std::size_t>(d) + 1, 1);
  if (fe_type_ == FeType::void_fe) return;
  if (polytope_->is_n_simplex() && d > 1) return;  // reoriented meshes: identity

  for (int m = 1; m <= d - 1; ++m) {
    const Polytope& ref = ref_polytope(m, (1u << m) - 1u);
    const int np = num_permutations(ref);
    perm_counts_[static_cast<std::size_t>(m)] = np;

    // The tuples indexing the n-face's own node functionals: interior nodes
    // for Lagrangian elements, the full facet test node set for
    // Raviart-Thomas facet moments.
    std::vector<std::vector<int>> row_tuples;
    if (fe_type_ == FeType::lagrangian) {
      const NodeArray local(ref, std::vector<int>(static_cast<std::size_t>(m), order_));
      for (int node : local.nodes_on_n_face(ref.num_n_faces() - 1, /*closed=*/false))
        row_tuples.push_back(local.node_tuple(node));
    } else if (m == d - 1) {
      row_tuples = generate_node_tuples((1u << m) - 1u, std::vector<int>(static_cast<std::size_t>(m), order_));
    } else {
      continue;
    }

    std::vector<std::vector<int>> corner_coords;
    for (int c = 0; c < ref.num_vertices(); ++c) {
      std::vector<int> x(static_cast<std::size_t>(m), 0);
      for (int i = 0; i < m; ++i)
        if (ref.vertex_coords(c) & (1u << i)) x[static_cast<std::size_t>(i)] = 1;
      corner_coords.push_back(std::move(x));
    }

    auto& table = perm_tables_[static_cast<std::size_t>(m)];
    table.assign(row_tuples.size() * static_cast<std::size_t>(np), -1);
    for (int p = 0; p < np; ++p) {
      CornerPermutation perm{m, decode_permutation(ref, p)};
      for (std::size_t i = 0; i < row_tuples.size(); ++i) {
        const auto mapped = perm.apply(row_tuples[i], order_, corner_coords);
        const auto it = std::find(row_tuples.begin(), row_tuples.end(), mapped);
        if (it == row_tuples.end())
          throw std::logic_error("permutation table: mapped node left the node set");
        table[i * static_cast<std::size_t>(np) + static_cast<std::size_t>(p)] =
            static_cast<int>(it - row_tuples.begin());
      }
    }
  }
}

ReferenceFe make_reference_fe(int num_dims, std::uint32_t topology, FeType fe_type, int order,
                              FieldType field_type, bool conforming) {
  if (num_dims < 1 || num_dims > max_space_dims)
    throw std::invalid_argument("make_reference_fe: dimension out of range");
  ReferenceFe fe;
  fe.polytope_ = &ref_polytope(num_dims, topology);
  fe.fe_type_ = fe_type;
  fe.field_type_ = field_type;
  fe.order_ = order;
  fe.conforming_ = conforming;

  switch (fe_type) {
    case FeType::lagrangian:
      if (order < 0) throw std::invalid_argument("make_reference_fe: negative order");
      fe.build_lagrangian();
      break;
    case FeType::raviart_thomas:
      if (order < 0) throw std::invalid_argument("make_reference_fe: negative order");
      fe.build_raviart_thomas();
      break;
    case FeType::void_fe:
      fe.num_sf_ = 0;
      fe.num_components_ = 1;
      fe.own_dofs_n_face_.resize(static_cast<std::size_t>(fe.polytope_->num_n_faces()));
      fe.dofs_n_face_.resize(static_cast<std::size_t>(fe.polytope_->num_n_faces()));
      fe.own_nodes_per_dim_.assign(static_cast<std::size_t>(num_dims) + 1, 0);
      break;
  }
  fe.build_permutation_tables();
  return fe;
}

}  // namespace fekit

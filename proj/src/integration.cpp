#include "fekit/integration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fekit {

void CellMap::create_at_points(const std::vector<Vec>& points, const ReferenceFe& geometry_fe) {
  geometry_fe_ = &geometry_fe;
  dim_ = geometry_fe.num_dims();
  num_points_ = static_cast<int>(points.size());
  geometry_table_ = geometry_fe.evaluate(points);
  jacobian_.assign(static_cast<std::size_t>(num_points_), Mat{});
  inv_jacobian_.assign(static_cast<std::size_t>(num_points_), Mat{});
  det_jacobian_.assign(static_cast<std::size_t>(num_points_), 0.0);
  physical_points_.assign(static_cast<std::size_t>(num_points_), Vec{});
}

void CellMap::create(const Quadrature& quadrature, const ReferenceFe& geometry_fe) {
  if (quadrature.num_dims != geometry_fe.num_dims())
    throw std::invalid_argument("cell map: quadrature dimension mismatch");
  create_at_points(quadrature.points, geometry_fe);
}

void CellMap::create_restricted_to_facet(const Quadrature& facet_quadrature,
                                         const ReferenceFe& geometry_fe, int facet_lid) {
  create_at_points(geometry_fe.facet_points_in_cell(facet_quadrature, facet_lid), geometry_fe);
}

void CellMap::update(const std::vector<Vec>& node_coords) {
  if (static_cast<int>(node_coords.size()) != geometry_fe_->num_shape_functions())
    throw std::invalid_argument("cell map: wrong number of geometry nodes");
  node_coords_ = node_coords;

  // Cell scale for the degeneracy guard.
  double scale = 0.0;
  for (std::size_t a = 1; a < node_coords.size(); ++a)
    scale = std::max(scale, norm(node_coords[a] - node_coords[0]));
  double scale_d = 1.0;
  for (int i = 0; i < dim_; ++i) scale_d *= std::max(scale, 1e-300);

  const int n = geometry_fe_->num_shape_functions();
  for (int p = 0; p < num_points_; ++p) {
    Mat j;
    Vec x;
    for (int a = 0; a < n; ++a) {
      const double v = geometry_table_.value(a, p, 0);
      for (int i = 0; i < dim_; ++i) {
        x[i] += node_coords[static_cast<std::size_t>(a)][i] * v;
        for (int g = 0; g < dim_; ++g)
          j(i, g) += node_coords[static_cast<std::size_t>(a)][i] * geometry_table_.gradient(a, p, 0, g);
      }
    }
    const double dj = det(j, dim_);
    if (std::abs(dj) < 1e-14 * scale_d)
      throw std::runtime_error("cell map: degenerate cell (vanishing Jacobian)");
    jacobian_[static_cast<std::size_t>(p)] = j;
    det_jacobian_[static_cast<std::size_t>(p)] = dj;
    inv_jacobian_[static_cast<std::size_t>(p)] = inverse(j, dim_, dj);
    physical_points_[static_cast<std::size_t>(p)] = x;
  }
}

Vec CellMap::map_point(const Vec& ref_point) const {
  const ShapeTable t = geometry_fe_->evaluate({ref_point});
  Vec x;
  for (int a = 0; a < geometry_fe_->num_shape_functions(); ++a)
    for (int i = 0; i < dim_; ++i) x[i] += node_coords_[static_cast<std::size_t>(a)][i] * t.value(a, 0, 0);
  return x;
}

namespace {

const ReferenceFe& facet_geometry_fe(const ReferenceFe& cell_geo) {
  static std::vector<std::pair<std::pair<int, std::uint32_t>, ReferenceFe>> cache;
  const int fd = cell_geo.num_dims() - 1;
  const std::uint32_t ft = cell_geo.polytope().is_n_cube() ? (fd >= 1 ? (1u << fd) - 1u : 0u) : 0u;
  for (auto& [key, fe] : cache)
    if (key == std::make_pair(fd, ft)) return fe;
  cache.emplace_back(std::make_pair(fd, ft),
                     make_reference_fe(fd >= 1 ? fd : 1, ft, FeType::lagrangian, 1, FieldType::scalar, true));
  return cache.back().second;
}

Vec barycenter(const std::vector<Vec>& pts) {
  Vec c;
  for (const Vec& p : pts) c += p;
  return (1.0 / static_cast<double>(pts.size())) * c;
}

}  // namespace

void FacetMaps::create(const Quadrature& facet_quadrature, const ReferenceFe& geometry_fe) {
  facet_quadrature_ = facet_quadrature;
  cell_dim_ = geometry_fe.num_dims();
  const int np = num_points();

  if (cell_dim_ >= 2) {
    const ReferenceFe& fgeo = facet_geometry_fe(geometry_fe);
    facet_geo_table_ = fgeo.evaluate(facet_quadrature_.points);
  }

  const int nf = geometry_fe.polytope().num_facets();
  restricted_plus_.assign(static_cast<std::size_t>(nf), CellMap{});
  restricted_minus_.assign(static_cast<std::size_t>(nf), CellMap{});
  for (int lid = 0; lid < nf; ++lid) {
    restricted_plus_[static_cast<std::size_t>(lid)].create_restricted_to_facet(facet_quadrature_, geometry_fe, lid);
    restricted_minus_[static_cast<std::size_t>(lid)].create_restricted_to_facet(facet_quadrature_, geometry_fe, lid);
  }
  facet_det_.assign(static_cast<std::size_t>(np), 0.0);
  normals_.assign(static_cast<std::size_t>(np), Vec{});
  facet_points_.assign(static_cast<std::size_t>(np), Vec{});
}

void FacetMaps::update(const std::vector<Vec>& facet_node_coords,
                       const std::vector<Vec>& cell_plus_coords,
                       const std::vector<Vec>& cell_minus_coords, int lid_plus, int lid_minus) {
  const int np = num_points();
  const int d = cell_dim_;
  const Vec cell_bary = barycenter(cell_plus_coords);
  const Vec facet_bary = barycenter(facet_node_coords);

  for (int p = 0; p < np; ++p) {
    Vec x;
    Vec t1, t2;
    if (d == 1) {
      // facets of 1D cells are points: unit measure, x-direction candidate
      x = facet_node_coords[0];
      t1[0] = 1.0;
      facet_det_[static_cast<std::size_t>(p)] = 1.0;
    } else {
      const int n = facet_geo_table_.num_functions;
      for (int a = 0; a < n; ++a) {
        const double v = facet_geo_table_.value(a, p, 0);
        for (int i = 0; i < d; ++i) {
          x[i] += facet_node_coords[static_cast<std::size_t>(a)][i] * v;
          t1[i] += facet_node_coords[static_cast<std::size_t>(a)][i] * facet_geo_table_.gradient(a, p, 0, 0);
          if (d == 3) t2[i] += facet_node_coords[static_cast<std::size_t>(a)][i] * facet_geo_table_.gradient(a, p, 0, 1);
        }
      }
      facet_det_[static_cast<std::size_t>(p)] = d == 2 ? norm(t1) : norm(cross(t1, t2));
      if (facet_det_[static_cast<std::size_t>(p)] <= 0.0)
        throw std::runtime_error("facet maps: degenerate facet");
    }
    facet_points_[static_cast<std::size_t>(p)] = x;

    Vec n;
    if (d == 1) {
      n = t1;
    } else if (d == 2) {
      n[0] = t1[1];
      n[1] = -t1[0];
    } else {
      n = cross(t1, t2);
    }
    const double nn = norm(n);
    n *= 1.0 / nn;
    // outward with respect to K+: the vector from the facet barycenter to
    // the cell barycenter must point against the normal
    if (dot(n, cell_bary - facet_bary) > 0.0) n *= -1.0;
    normals_[static_cast<std::size_t>(p)] = n;
  }

  current_plus_ = lid_plus;
  restricted_plus_[static_cast<std::size_t>(lid_plus)].update(cell_plus_coords);
  current_minus_ = lid_minus;
  if (lid_minus >= 0) restricted_minus_[static_cast<std::size_t>(lid_minus)].update(cell_minus_coords);
}

double FacetMaps::facet_measure() const {
  double s = 0.0;
  for (int p = 0; p < num_points(); ++p) s += facet_quadrature_.weights[static_cast<std::size_t>(p)] * facet_det(p);
  return s;
}

void CellIntegrator::create(const Quadrature& quadrature, const ReferenceFe& fe) {
  fe_ = &fe;
  reference_ = fe.create_interpolation(quadrature);
  physical_ = reference_;
}

void CellIntegrator::update(const CellMap& cell_map) {
  fe_->apply_cell_map(reference_, cell_map.jacobians(), cell_map.inv_jacobians(),
                      cell_map.det_jacobians(), physical_);
  if (physical_.num_components == 1 && physical_.num_functions > 0) {
    values_panel_ = physical_.values_panel();
    gradients_panel_ = physical_.gradients_panel();
  }
}

void CellIntegrator::get_values(std::vector<double>& out) const {
  const ShapeTable& t = physical_;
  out.assign(static_cast<std::size_t>(t.num_functions) * t.num_points * t.num_components, 0.0);
  std::copy(t.values.begin(), t.values.end(), out.begin());
}

void CellIntegrator::get_gradients(std::vector<double>& out) const {
  const ShapeTable& t = physical_;
  out.assign(t.gradients.size(), 0.0);
  std::copy(t.gradients.begin(), t.gradients.end(), out.begin());
}

void CellIntegrator::get_divergences(std::vector<double>& out) const {
  if (physical_.num_components < 2)
    throw std::logic_error("cell integrator: divergences of a scalar FE are not defined");
  out.assign(static_cast<std::size_t>(physical_.num_functions) * physical_.num_points, 0.0);
  for (int f = 0; f < physical_.num_functions; ++f)
    for (int p = 0; p < physical_.num_points; ++p)
      out[static_cast<std::size_t>(f) * physical_.num_points + p] = physical_.divergence(f, p);
}

void FacetIntegrator::create(const Quadrature& facet_quadrature, const ReferenceFe& fe) {
  fe_ = &fe;
  const int nf = fe.polytope().num_facets();
  reference_per_lid_.clear();
  for (int lid = 0; lid < nf; ++lid)
    reference_per_lid_.push_back(fe.create_interpolation_on_facet(facet_quadrature, lid));

  // Quadrature point permutations for every permutation index, by matching
  // facet reference coordinates under the corner-induced affine map.
  const int fd = fe.num_dims() - 1;
  const Polytope& facet_ref =
      ref_polytope(fd, fe.polytope().is_n_cube() ? (fd >= 1 ? (1u << fd) - 1u : 0u) : 0u);
  const int nperm = fe.polytope().is_n_simplex() ? 1 : num_permutations(facet_ref);
  const int np = static_cast<int>(facet_quadrature.points.size());

  std::vector<std::vector<double>> corner_coords;
  for (int c = 0; c < facet_ref.num_vertices(); ++c) {
    std::vector<double> x(static_cast<std::size_t>(fd), 0.0);
    for (int i = 0; i < fd; ++i)
      if (facet_ref.vertex_coords(c) & (1u << i)) x[static_cast<std::size_t>(i)] = 1.0;
    corner_coords.push_back(std::move(x));
  }

  qpoints_perm_.assign(static_cast<std::size_t>(nperm), std::vector<int>(static_cast<std::size_t>(np), -1));
  for (int pi = 0; pi < nperm; ++pi) {
    auto& perm = qpoints_perm_[static_cast<std::size_t>(pi)];
    if (pi == 0) {
      for (int p = 0; p < np; ++p) perm[static_cast<std::size_t>(p)] = p;
      continue;
    }
    const auto c = decode_permutation(facet_ref, pi);
    // affine map T: target facet coords -> source facet coords
    auto apply = [&](const Vec& u) {
      Vec s;
      for (int i = 0; i < fd; ++i) s[i] = corner_coords[static_cast<std::size_t>(c[0])][static_cast<std::size_t>(i)];
      for (int a = 0; a < fd; ++a) {
        // corner adjacent to the origin along local direction a
        int unit = -1;
        for (std::size_t cc = 0; cc < corner_coords.size(); ++cc) {
          bool is_unit = true;
          for (int i = 0; i < fd; ++i)
            if (corner_coords[cc][static_cast<std::size_t>(i)] != (i == a ? 1.0 : 0.0)) is_unit = false;
          if (is_unit) unit = static_cast<int>(cc);
        }
        const auto& img = corner_coords[static_cast<std::size_t>(c[static_cast<std::size_t>(unit)])];
        const auto& org = corner_coords[static_cast<std::size_t>(c[0])];
        for (int i = 0; i < fd; ++i)
          s[i] += u[a] * (img[static_cast<std::size_t>(i)] - org[static_cast<std::size_t>(i)]);
      }
      return s;
    };
    for (int gp = 0; gp < np; ++gp) {
      int match = -1;
      for (int j = 0; j < np; ++j) {
        const Vec mapped = apply(facet_quadrature.points[static_cast<std::size_t>(j)]);
        double dist = 0.0;
        for (int i = 0; i < fd; ++i)
          dist = std::max(dist, std::abs(mapped[i] - facet_quadrature.points[static_cast<std::size_t>(gp)][i]));
        if (dist <= 1e-10) {
          match = j;
          break;
        }
      }
      if (match < 0)
        throw std::runtime_error("facet integrator: no bijective quadrature point match (inconsistent facet geometry)");
      perm[static_cast<std::size_t>(gp)] = match;
    }
  }
}

void FacetIntegrator::update(int lid_plus, int lid_minus, int permutation_index,
                             const CellMap& map_plus, const CellMap& map_minus) {
  current_perm_ = permutation_index;
  fe_->apply_cell_map(reference_per_lid_[static_cast<std::size_t>(lid_plus)], map_plus.jacobians(),
                      map_plus.inv_jacobians(), map_plus.det_jacobians(), physical_plus_);
  fe_->apply_cell_map(reference_per_lid_[static_cast<std::size_t>(lid_minus)], map_minus.jacobians(),
                      map_minus.inv_jacobians(), map_minus.det_jacobians(), physical_minus_);
}

void FacetIntegrator::update_boundary(int lid_plus, const CellMap& map_plus) {
  current_perm_ = 0;
  fe_->apply_cell_map(reference_per_lid_[static_cast<std::size_t>(lid_plus)], map_plus.jacobians(),
                      map_plus.inv_jacobians(), map_plus.det_jacobians(), physical_plus_);
}

}  // namespace fekit

#pragma once

#include <cstdint>
#include <vector>

#include "fekit/geometry.hpp"

namespace fekit {

/// Quadrature points and weights on a reference polytope. A 0-dimensional
/// rule (facet integration of 1D meshes) is a single point of weight 1.
struct Quadrature {
  int num_dims = 0;
  std::vector<Vec> points;
  std::vector<double> weights;

  int num_points() const { return static_cast<int>(points.size()); }
};

/// 1D Gauss-Legendre rule with n points, mapped to [0, 1]; exact on
/// polynomials of degree 2n-1.
Quadrature gauss_legendre_1d(int num_points);

/// Tensor Gauss-Legendre rule on the unit n-cube with a fixed point count
/// per direction.
Quadrature tensor_gauss(int dims, int points_per_dir);

/// Duffy collapse of a tensor Gauss rule onto the unit n-simplex. The
/// collapse has a polynomial Jacobian of degree at most dims-1 per variable,
/// so a rule with n points per direction integrates total degree
/// 2n-1-(dims-1) exactly.
Quadrature duffy_quadrature(int dims, int points_per_dir);

/// Rule integrating polynomials up to `degree` exactly on the unit reference
/// polytope of the given topology. n-cubes use a tensor Gauss-Legendre rule
/// with ceil((degree+1)/2) points per direction; n-simplices use the Duffy
/// collapse of a tensor rule, with ceil((degree+1)/2) + ceil((dims-1)/2)
/// points per direction to cover the polynomial Jacobian of the collapse.
Quadrature make_quadrature(int dims, std::uint32_t topology, int degree);

}  // namespace fekit

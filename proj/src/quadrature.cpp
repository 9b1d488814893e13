#include "fekit/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace fekit {

namespace {

// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_n, with the
// standard interlacing initial guesses.
void gauss_legendre_reference(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(static_cast<std::size_t>(n));
  w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      if (n == 1) p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = (n == 1) ? t : p1;
      const double pn1 = (n == 1) ? 1.0 : p0;
      dp = n * (t * pn - pn1) / (t * t - 1.0);
      const double dt = pn / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[static_cast<std::size_t>(i)] = t;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

}  // namespace

Quadrature gauss_legendre_1d(int num_points) {
  if (num_points < 1) throw std::invalid_argument("quadrature: need at least one point");
  std::vector<double> x, w;
  gauss_legendre_reference(num_points, x, w);
  Quadrature q;
  q.num_dims = 1;
  for (int i = num_points - 1; i >= 0; --i) {  // ascending abscissas
    Vec p;
    p[0] = 0.5 * (x[static_cast<std::size_t>(i)] + 1.0);
    q.points.push_back(p);
    q.weights.push_back(0.5 * w[static_cast<std::size_t>(i)]);
  }
  return q;
}

namespace {

Quadrature tensor_rule(int dims, int n, bool duffy) {
  const Quadrature line = gauss_legendre_1d(n);
  Quadrature q;
  q.num_dims = dims;
  std::vector<int> idx(static_cast<std::size_t>(dims), 0);
  int total = 1;
  for (int i = 0; i < dims; ++i) total *= n;
  for (int c = 0; c < total; ++c) {
    Vec u;
    double w = 1.0;
    for (int i = 0; i < dims; ++i) {
      u[i] = line.points[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])][0];
      w *= line.weights[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    }
    if (!duffy) {
      q.points.push_back(u);
      q.weights.push_back(w);
    } else {
      // Duffy collapse of the cube onto the simplex:
      //   x_i = u_i * prod_{j<i} (1 - u_j),
      // with Jacobian prod_j (1 - u_j)^(dims-1-j).
      Vec x;
      double shrink = 1.0;
      double jac = 1.0;
      for (int i = 0; i < dims; ++i) {
        x[i] = u[i] * shrink;
        jac *= std::pow(1.0 - u[i], dims - 1 - i);
        shrink *= 1.0 - u[i];
      }
      q.points.push_back(x);
      q.weights.push_back(w * jac);
    }
    for (int i = 0; i < dims; ++i) {
      if (++idx[static_cast<std::size_t>(i)] < n) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
  }
  return q;
}

}  // namespace

Quadrature tensor_gauss(int dims, int points_per_dir) { return tensor_rule(dims, points_per_dir, false); }

Quadrature duffy_quadrature(int dims, int points_per_dir) { return tensor_rule(dims, points_per_dir, true); }

Quadrature make_quadrature(int dims, std::uint32_t topology, int degree) {
  if (degree < 0) throw std::invalid_argument("quadrature: negative degree");
  if (dims == 0) {
    Quadrature q;
    q.num_dims = 0;
    q.points.push_back(Vec{});
    q.weights.push_back(1.0);
    return q;
  }
  if (dims > max_space_dims) throw std::invalid_argument("quadrature: dimension out of range");

  const bool cube = dims == 1 || topology == (1u << dims) - 1u;
  if (!cube && topology != 0u)
    throw std::invalid_argument("quadrature: only n-cube and n-simplex rules are available");

  const int n = (degree + 2) / 2;  // ceil((degree+1)/2)
  if (cube) return tensor_gauss(dims, n);
  return duffy_quadrature(dims, n + dims / 2);  // ceil((dims-1)/2) extra for the Jacobian
}

}  // namespace fekit

#include "fekit/solver.hpp"

#include <cmath>
#include <stdexcept>

#include "fekit/kernels.hpp"

namespace fekit {

SolveResult cg_jacobi(const SparseMatrix& a, const VectorArray& b, double tol, int max_iterations) {
  if (!a.symmetric())
    throw std::invalid_argument("cg_jacobi: matrix not flagged symmetric");
  if (a.sign() == MatrixSign::indefinite)
    throw std::invalid_argument("cg_jacobi: matrix not flagged (semi)definite");
  const int n = a.num_rows();
  if (max_iterations < 0) max_iterations = std::max(10 * n, 1000);

  std::vector<double> inv_diag = a.diagonal();
  for (double& d : inv_diag) d = d != 0.0 ? 1.0 / d : 1.0;

  SolveResult res;
  res.x = VectorArray(n);
  VectorArray r = b, z(n), p(n), ap(n);
  const double bnorm = b.norm2();
  if (bnorm == 0.0) return res;

  for (int i = 0; i < n; ++i) z[i] = inv_diag[static_cast<std::size_t>(i)] * r[i];
  p = z;
  double rz = kernels::dot(r.v.data(), z.v.data(), n);
  for (int it = 0; it < max_iterations; ++it) {
    a.matvec(p.v.data(), ap.v.data());
    const double pap = kernels::dot(p.v.data(), ap.v.data(), n);
    const double alpha = rz / pap;
    kernels::axpy(alpha, p.v.data(), res.x.v.data(), n);
    kernels::axpy(-alpha, ap.v.data(), r.v.data(), n);
    res.iterations = it + 1;
    res.residual = r.norm2() / bnorm;
    if (res.residual <= tol) return res;
    for (int i = 0; i < n; ++i) z[i] = inv_diag[static_cast<std::size_t>(i)] * r[i];
    const double rz_new = kernels::dot(r.v.data(), z.v.data(), n);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw std::runtime_error("cg_jacobi: no convergence within the iteration limit");
}

SolveResult dense_lu(const SparseMatrix& a, const VectorArray& b, int pin_row, int size_cap) {
  const int n = a.num_rows();
  if (n != a.num_cols()) throw std::invalid_argument("dense_lu: matrix must be square");
  if (n > size_cap) throw std::invalid_argument("dense_lu: system exceeds the size cap");

  std::vector<double> m = a.dense();
  VectorArray rhs = b;
  if (pin_row >= 0) {
    for (int j = 0; j < n; ++j) {
      m[static_cast<std::size_t>(pin_row) * n + j] = 0.0;
      m[static_cast<std::size_t>(j) * n + pin_row] = 0.0;
    }
    m[static_cast<std::size_t>(pin_row) * n + pin_row] = 1.0;
    rhs[pin_row] = 0.0;
  }

  std::vector<int> piv(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int r = k + 1; r < n; ++r)
      if (std::abs(m[static_cast<std::size_t>(r) * n + k]) > std::abs(m[static_cast<std::size_t>(p) * n + k])) p = r;
    piv[static_cast<std::size_t>(k)] = p;
    if (p != k)
      for (int j = 0; j < n; ++j) std::swap(m[static_cast<std::size_t>(k) * n + j], m[static_cast<std::size_t>(p) * n + j]);
    const double pivot = m[static_cast<std::size_t>(k) * n + k];
    if (pivot == 0.0) throw std::runtime_error("dense_lu: singular pivot");
    for (int r = k + 1; r < n; ++r) {
      const double f = m[static_cast<std::size_t>(r) * n + k] / pivot;
      m[static_cast<std::size_t>(r) * n + k] = f;
      for (int j = k + 1; j < n; ++j) m[static_cast<std::size_t>(r) * n + j] -= f * m[static_cast<std::size_t>(k) * n + j];
    }
  }

  SolveResult res;
  res.x = rhs;
  auto& x = res.x;
  for (int k = 0; k < n; ++k) std::swap(x[k], x[piv[static_cast<std::size_t>(k)]]);
  for (int k = 0; k < n; ++k)
    for (int r = k + 1; r < n; ++r) x[r] -= m[static_cast<std::size_t>(r) * n + k] * x[k];
  for (int k = n - 1; k >= 0; --k) {
    for (int j = k + 1; j < n; ++j) x[k] -= m[static_cast<std::size_t>(k) * n + j] * x[j];
    x[k] /= m[static_cast<std::size_t>(k) * n + k];
  }

  // backward-stable residual report
  VectorArray r(n);
  a.matvec(x.v.data(), r.v.data());
  if (pin_row >= 0) r[pin_row] = b[pin_row];  // pinned row excluded
  double num = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = (pin_row == i ? 0.0 : r[i] - b[i]);
    num += d * d;
  }
  const double bn = b.norm2();
  res.residual = bn > 0 ? std::sqrt(num) / bn : std::sqrt(num);
  return res;
}

}  // namespace fekit

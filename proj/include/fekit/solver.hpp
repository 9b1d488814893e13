#pragma once

#include "fekit/sparse.hpp"

namespace fekit {

struct SolveResult {
  VectorArray x;
  int iterations = 0;
  double residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients; requires the symmetric flag
/// and a (semi)definite sign. Relative residual tolerance 1e-10 by default.
SolveResult cg_jacobi(const SparseMatrix& a, const VectorArray& b, double tol = 1e-10,
                      int max_iterations = -1);

/// Dense LU with partial pivoting for desk-scale systems (indefinite saddle
/// points included). `pin_row` >= 0 replaces that row/column by the identity
/// to fix a null mode (e.g. the pressure constant).
SolveResult dense_lu(const SparseMatrix& a, const VectorArray& b, int pin_row = -1,
                     int size_cap = 20000);

}  // namespace fekit

#pragma once

#include <vector>

#include "fekit/geometry.hpp"

namespace fekit {

/// A polynomial in one variable. Lagrange polynomials store the node
/// coordinates of their basis in the first order+1 coefficient entries and
/// the normalization factor 1/prod(x_m - x_s) in the last one; monomials are
/// determined by the order alone.
class Polynomial1D {
 public:
  static Polynomial1D lagrange(const std::vector<double>& nodes, int own_node);
  static Polynomial1D monomial(int order);

  int order() const { return order_; }

  /// Value and first derivative at x.
  void eval(double x, double& value, double& derivative) const;

 private:
  enum class Kind { lagrange, monomial };
  Kind kind_ = Kind::monomial;
  int order_ = 0;
  int own_node_ = 0;
  std::vector<double> coefficients_;
};

struct PolynomialBasis1D {
  std::vector<Polynomial1D> polynomials;
  int size() const { return static_cast<int>(polynomials.size()); }
};

/// Lagrange basis on a set of strictly distinct nodes: l_m(x_l) = delta_ml.
PolynomialBasis1D lagrange_basis_1d(const std::vector<double>& nodes);

/// Equidistant nodes i/k on [0,1] (a single midpoint node for k = 0).
PolynomialBasis1D lagrange_basis_equidistant(int order);

PolynomialBasis1D monomial_basis_1d(int order);

/// Values and first derivatives of a set of scalar functions at a set of
/// points. Plain storage container; layout [function][point] and
/// [function][point][dim].
struct BasisEvaluation {
  int num_functions = 0;
  int num_points = 0;
  int dim = 0;
  std::vector<double> values;
  std::vector<double> gradients;

  void resize(int nf, int np, int d) {
    num_functions = nf;
    num_points = np;
    dim = d;
    values.assign(static_cast<std::size_t>(nf) * np, 0.0);
    gradients.assign(static_cast<std::size_t>(nf) * np * d, 0.0);
  }
  double& value(int f, int p) { return values[static_cast<std::size_t>(f) * num_points + p]; }
  double value(int f, int p) const { return values[static_cast<std::size_t>(f) * num_points + p]; }
  double& gradient(int f, int p, int i) {
    return gradients[(static_cast<std::size_t>(f) * num_points + p) * dim + i];
  }
  double gradient(int f, int p, int i) const {
    return gradients[(static_cast<std::size_t>(f) * num_points + p) * dim + i];
  }
};

/// Cartesian product of 1D bases, one per direction (orders may differ).
/// Function ordering is lexicographic in the multi-index with the first
/// direction running fastest, matching the node numbering.
class TensorProductSpace {
 public:
  TensorProductSpace(int num_dims, std::vector<PolynomialBasis1D> bases);

  int num_dims() const { return num_dims_; }
  int dimension() const { return dimension_; }
  BasisEvaluation evaluate(const std::vector<Vec>& points) const;

 private:
  int num_dims_;
  int dimension_;
  std::vector<PolynomialBasis1D> bases_;
};

/// Monomial space spanning total degree <= order in num_dims variables,
/// with multi-indices enumerated first-direction-fastest.
class TruncatedTensorProductSpace {
 public:
  TruncatedTensorProductSpace(int num_dims, int order);

  int num_dims() const { return num_dims_; }
  int order() const { return order_; }
  int dimension() const { return static_cast<int>(multi_indices_.size()); }
  const std::vector<std::vector<int>>& multi_indices() const { return multi_indices_; }
  BasisEvaluation evaluate(const std::vector<Vec>& points) const;

 private:
  int num_dims_;
  int order_;
  std::vector<std::vector<int>> multi_indices_;
};

}  // namespace fekit

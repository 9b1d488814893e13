#include "fekit/polynomial.hpp"

#include <cmath>
#include <stdexcept>

#include "fekit/node_array.hpp"

namespace fekit {

Polynomial1D Polynomial1D::lagrange(const std::vector<double>& nodes, int own_node) {
  Polynomial1D p;
  p.kind_ = Kind::lagrange;
  p.order_ = static_cast<int>(nodes.size()) - 1;
  p.own_node_ = own_node;
  double denom = 1.0;
  for (int s = 0; s <= p.order_; ++s)
    if (s != own_node) denom *= nodes[static_cast<std::size_t>(own_node)] - nodes[static_cast<std::size_t>(s)];
  if (denom == 0.0) throw std::invalid_argument("lagrange polynomial: duplicate nodes");
  // Node coordinates first, the normalization 1/prod(x_m - x_s) last.
  p.coefficients_ = nodes;
  p.coefficients_.push_back(1.0 / denom);
  return p;
}

Polynomial1D Polynomial1D::monomial(int order) {
  Polynomial1D p;
  p.kind_ = Kind::monomial;
  p.order_ = order;
  return p;
}

void Polynomial1D::eval(double x, double& value, double& derivative) const {
  if (kind_ == Kind::monomial) {
    if (order_ == 0) {
      value = 1.0;
      derivative = 0.0;
      return;
    }
    const double lower = std::pow(x, order_ - 1);
    value = lower * x;
    derivative = order_ * lower;
    return;
  }
  // Lagrange: product of (x - x_s) over the other nodes; the derivative is
  // the product-rule sum with one factor left out at a time.
  const double norm = coefficients_.back();
  double prod = 1.0;
  double dsum = 0.0;
  for (int s = 0; s <= order_; ++s) {
    if (s == own_node_) continue;
    const double factor = x - coefficients_[static_cast<std::size_t>(s)];
    double partial = 1.0;
    for (int r = 0; r <= order_; ++r) {
      if (r == own_node_ || r == s) continue;
      partial *= x - coefficients_[static_cast<std::size_t>(r)];
    }
    dsum += partial;
    prod *= factor;
  }
  value = norm * prod;
  derivative = norm * dsum;
}

PolynomialBasis1D lagrange_basis_1d(const std::vector<double>& nodes) {
  if (nodes.empty()) throw std::invalid_argument("lagrange basis: empty node set");
  for (std::size_t a = 0; a < nodes.size(); ++a)
    for (std::size_t b = a + 1; b < nodes.size(); ++b)
      if (nodes[a] == nodes[b]) throw std::invalid_argument("lagrange basis: duplicate nodes");
  PolynomialBasis1D basis;
  for (int m = 0; m < static_cast<int>(nodes.size()); ++m)
    basis.polynomials.push_back(Polynomial1D::lagrange(nodes, m));
  return basis;
}

PolynomialBasis1D lagrange_basis_equidistant(int order) {
  std::vector<double> nodes;
  if (order == 0) {
    nodes = {0.5};
  } else {
    for (int i = 0; i <= order; ++i) nodes.push_back(static_cast<double>(i) / order);
  }
  return lagrange_basis_1d(nodes);
}

PolynomialBasis1D monomial_basis_1d(int order) {
  PolynomialBasis1D basis;
  for (int i = 0; i <= order; ++i) basis.polynomials.push_back(Polynomial1D::monomial(i));
  return basis;
}

TensorProductSpace::TensorProductSpace(int num_dims, std::vector<PolynomialBasis1D> bases)
    : num_dims_(num_dims), bases_(std::move(bases)) {
  if (static_cast<int>(bases_.size()) != num_dims_)
    throw std::invalid_argument("tensor space: one 1D basis per dimension required");
  dimension_ = 1;
  for (const auto& b : bases_) dimension_ *= b.size();
  if (dimension_ == 0) throw std::invalid_argument("tensor space: empty 1D basis");
}

BasisEvaluation TensorProductSpace::evaluate(const std::vector<Vec>& points) const {
  if (points.empty()) throw std::invalid_argument("evaluate_space: empty point list");
  const int np = static_cast<int>(points.size());
  BasisEvaluation out;
  out.resize(dimension_, np, num_dims_);

  // Tabulate the 1D values/derivatives once per point, then expand the
  // product over the lexicographic multi-index (first direction fastest).
  std::vector<std::vector<double>> vals(static_cast<std::size_t>(num_dims_));
  std::vector<std::vector<double>> ders(static_cast<std::size_t>(num_dims_));
  for (int p = 0; p < np; ++p) {
    for (int i = 0; i < num_dims_; ++i) {
      const int n = bases_[static_cast<std::size_t>(i)].size();
      vals[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(n));
      ders[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(n));
      for (int m = 0; m < n; ++m)
        bases_[static_cast<std::size_t>(i)].polynomials[static_cast<std::size_t>(m)].eval(
            points[static_cast<std::size_t>(p)][i], vals[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)],
            ders[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)]);
    }
    std::vector<int> m(static_cast<std::size_t>(num_dims_), 0);
    for (int f = 0; f < dimension_; ++f) {
      double v = 1.0;
      for (int i = 0; i < num_dims_; ++i) v *= vals[static_cast<std::size_t>(i)][static_cast<std::size_t>(m[static_cast<std::size_t>(i)])];
      out.value(f, p) = v;
      for (int g = 0; g < num_dims_; ++g) {
        double dv = 1.0;
        for (int i = 0; i < num_dims_; ++i) {
          const auto& tab = (i == g) ? ders : vals;
          dv *= tab[static_cast<std::size_t>(i)][static_cast<std::size_t>(m[static_cast<std::size_t>(i)])];
        }
        out.gradient(f, p, g) = dv;
      }
      for (int i = 0; i < num_dims_; ++i) {
        if (++m[static_cast<std::size_t>(i)] < bases_[static_cast<std::size_t>(i)].size()) break;
        m[static_cast<std::size_t>(i)] = 0;
      }
    }
  }
  return out;
}

TruncatedTensorProductSpace::TruncatedTensorProductSpace(int num_dims, int order)
    : num_dims_(num_dims), order_(order) {
  // Same enumeration as the simplex node set.
  multi_indices_ = generate_node_tuples(0u, std::vector<int>(static_cast<std::size_t>(num_dims), order));
}

BasisEvaluation TruncatedTensorProductSpace::evaluate(const std::vector<Vec>& points) const {
  if (points.empty()) throw std::invalid_argument("evaluate_space: empty point list");
  const int np = static_cast<int>(points.size());
  BasisEvaluation out;
  out.resize(dimension(), np, num_dims_);
  for (int p = 0; p < np; ++p) {
    for (int f = 0; f < dimension(); ++f) {
      const auto& alpha = multi_indices_[static_cast<std::size_t>(f)];
      double v = 1.0;
      for (int i = 0; i < num_dims_; ++i) {
        const int a = alpha[static_cast<std::size_t>(i)];
        v *= a == 0 ? 1.0 : std::pow(points[static_cast<std::size_t>(p)][i], a);
      }
      out.value(f, p) = v;
      for (int g = 0; g < num_dims_; ++g) {
        const int a = alpha[static_cast<std::size_t>(g)];
        if (a == 0) {
          out.gradient(f, p, g) = 0.0;
          continue;
        }
        double dv = a * (a == 1 ? 1.0 : std::pow(points[static_cast<std::size_t>(p)][g], a - 1));
        for (int i = 0; i < num_dims_; ++i) {
          if (i == g) continue;
          const int ai = alpha[static_cast<std::size_t>(i)];
          dv *= ai == 0 ? 1.0 : std::pow(points[static_cast<std::size_t>(p)][i], ai);
        }
        out.gradient(f, p, g) = dv;
      }
    }
  }
  return out;
}

}  // namespace fekit

#pragma once

#include <memory>

#include "fekit/assembler.hpp"

namespace fekit {

/// The discrete weak form: fills the assembler with cell (and facet)
/// contributions for a given FE space. Concrete problems subclass this and
/// carry their own data (coefficients, forcing, Dirichlet FE function, DG
/// parameters).
class DiscreteIntegration {
 public:
  virtual ~DiscreteIntegration() = default;
  virtual void integrate(FeSpace& space, Assembler& assembler) = 0;
};

struct OperatorOptions {
  BlockLayout layout;
  bool symmetric_storage = false;
  bool symmetric = false;
  MatrixSign sign = MatrixSign::indefinite;
};

/// Affine operator F(u) = A u - f produced by a discrete integration through
/// an assembler; the FE solution is its root.
class AffineOperator {
 public:
  AffineOperator(FeSpace& space, DiscreteIntegration& integration, OperatorOptions options);

  enum class State { created, numerically_set_up };
  State state() const { return state_; }

  /// Allocates and zeroes the storage, runs the discrete integration and
  /// compresses. A second call reuses the sparsity pattern.
  void numerical_setup();

  Assembler& assembler() { return *assembler_; }
  SparseMatrix& matrix() { return assembler_->matrix(); }
  VectorArray& rhs() { return assembler_->vector(); }
  FeSpace& space() { return *space_; }

  /// r = A u - f (monolithic layout only).
  VectorArray apply(const VectorArray& u) const;

 private:
  FeSpace* space_;
  DiscreteIntegration* integration_;
  OperatorOptions options_;
  std::unique_ptr<Assembler> assembler_;
  State state_ = State::created;
};

}  // namespace fekit

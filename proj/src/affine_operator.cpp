#include "fekit/affine_operator.hpp"

#include <stdexcept>

namespace fekit {

AffineOperator::AffineOperator(FeSpace& space, DiscreteIntegration& integration,
                               OperatorOptions options)
    : space_(&space), integration_(&integration), options_(std::move(options)) {
  space_->generate_global_dof_numbering(options_.layout);
}

void AffineOperator::numerical_setup() {
  if (!assembler_) {
    assembler_ = std::make_unique<Assembler>(*space_, options_.symmetric_storage, options_.symmetric,
                                             options_.sign);
  } else {
    assembler_->zero();
  }
  integration_->integrate(*space_, *assembler_);
  assembler_->compress();
  state_ = State::numerically_set_up;
}

VectorArray AffineOperator::apply(const VectorArray& u) const {
  if (state_ != State::numerically_set_up)
    throw std::logic_error("affine operator: apply before numerical_setup");
  const SparseMatrix& a = assembler_->matrix();
  VectorArray r(a.num_rows());
  a.matvec(u.v.data(), r.v.data());
  const VectorArray& f = assembler_->vector();
  for (int i = 0; i < r.size(); ++i) r[i] -= f[i];
  return r;
}

}  // namespace fekit

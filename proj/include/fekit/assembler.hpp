#pragma once

#include <span>

#include "fekit/fe_space.hpp"
#include "fekit/sparse.hpp"

namespace fekit {

/// Signed DOF ids (with Raviart-Thomas gather signs) of all fields on one
/// cell, concatenated field-major; the layout every element matrix follows.
struct CellDofs {
  std::vector<int> ids;
  std::vector<std::int8_t> signs;
  std::vector<int> field;
  int size() const { return static_cast<int>(ids.size()); }

  void collect(const FeSpace& space, int cell);
};

/// FE-assembly front end over either a monolithic or a blocked system.
/// Rows/columns with fixed (negative) ids are skipped; fixed columns first
/// push their Dirichlet contribution into the element vector, so the
/// assembled system has as many rows as free DOFs.
class Assembler {
 public:
  Assembler(const FeSpace& space, bool symmetric_storage, bool symmetric, MatrixSign sign);
  virtual ~Assembler() = default;

  const FeSpace& space() const { return *space_; }
  bool is_block() const { return layout_.num_blocks > 1; }
  SparseMatrix& matrix() { return matrix_.block(0, 0); }
  const SparseMatrix& matrix() const { return matrix_.block(0, 0); }
  BlockMatrix& block_matrix() { return matrix_; }
  VectorArray& vector() { return vector_.blocks[0]; }
  const VectorArray& vector() const { return vector_.blocks[0]; }
  BlockVector& block_vector() { return vector_; }

  void zero();
  void compress() { matrix_.compress(); }

  /// elvec_a -= elmat_ac * u^D_c over the fixed columns c (row-major elmat,
  /// columns described by col_dofs).
  virtual void lift_dirichlet(std::span<const double> elmat, const CellDofs& col_dofs,
                              std::span<double> elvec, const FeFunction* dirichlet) const;

  virtual void add_matrix(std::span<const double> elmat, const CellDofs& row_dofs,
                          const CellDofs& col_dofs);
  virtual void add_vector(std::span<const double> elvec, const CellDofs& row_dofs);

  /// Cell path: lift + matrix + vector in one call.
  void assemble_cell(std::span<const double> elmat, std::span<const double> elvec,
                     const CellDofs& dofs, const FeFunction* dirichlet);

  /// Facet path: the four facet-wise matrices and two vectors of an interior
  /// facet. Boundary facets degenerate to the (plus, plus) block.
  void assemble_facet(std::span<const double> a_pp, std::span<const double> a_pm,
                      std::span<const double> a_mp, std::span<const double> a_mm,
                      std::span<double> v_p, std::span<double> v_m, const CellDofs& dofs_plus,
                      const CellDofs& dofs_minus, const FeFunction* dirichlet);

 private:
  const FeSpace* space_;
  BlockLayout layout_;
  BlockMatrix matrix_;
  BlockVector vector_;
};

}  // namespace fekit

#include "fekit/assembler.hpp"

#include <stdexcept>

namespace fekit {

void CellDofs::collect(const FeSpace& space, int cell) {
  ids.clear();
  signs.clear();
  field.clear();
  for (int f = 0; f < space.num_fields(); ++f) {
    const auto i = space.fe_dofs(cell, f);
    const auto s = space.fe_dof_signs(cell, f);
    ids.insert(ids.end(), i.begin(), i.end());
    signs.insert(signs.end(), s.begin(), s.end());
    field.insert(field.end(), i.size(), f);
  }
}

Assembler::Assembler(const FeSpace& space, bool symmetric_storage, bool symmetric, MatrixSign sign)
    : space_(&space), layout_(space.block_layout()) {
  const int nb = layout_.num_blocks;
  matrix_.num_blocks = nb;
  matrix_.blocks.resize(static_cast<std::size_t>(nb) * nb);
  matrix_.coupled.assign(static_cast<std::size_t>(nb) * nb, 0);
  std::vector<std::uint8_t> block_coupled(static_cast<std::size_t>(nb) * nb, 0);
  for (int fi = 0; fi < space.num_fields(); ++fi)
    for (int fj = 0; fj < space.num_fields(); ++fj)
      if (layout_.coupled(fi, fj))
        block_coupled[static_cast<std::size_t>(space.block_of_field(fi)) * nb + space.block_of_field(fj)] = 1;
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j) {
      // uncoupled blocks keep their shape but never receive entries
      matrix_.coupled[static_cast<std::size_t>(i) * nb + j] = block_coupled[static_cast<std::size_t>(i) * nb + j];
      const bool sym_store = symmetric_storage && nb == 1;
      matrix_.blocks[static_cast<std::size_t>(i) * nb + j] =
          SparseMatrix(space.num_block_dofs(i), space.num_block_dofs(j), sym_store,
                       symmetric && i == j, i == j ? sign : MatrixSign::indefinite);
    }
  vector_.blocks.clear();
  for (int b = 0; b < nb; ++b) vector_.blocks.emplace_back(space.num_block_dofs(b));
}

void Assembler::zero() {
  matrix_.zero_values();
  vector_.zero();
}

void Assembler::lift_dirichlet(std::span<const double> elmat, const CellDofs& col_dofs,
                               std::span<double> elvec, const FeFunction* dirichlet) const {
  if (!dirichlet) return;
  const int n_cols = col_dofs.size();
  const int n_rows = static_cast<int>(elvec.size());
  for (int c = 0; c < n_cols; ++c) {
    if (col_dofs.ids[static_cast<std::size_t>(c)] >= 0) continue;
    const double u_fix = col_dofs.signs[static_cast<std::size_t>(c)] *
                         dirichlet->fixed[static_cast<std::size_t>(-1 - col_dofs.ids[static_cast<std::size_t>(c)])];
    if (u_fix == 0.0) continue;
    for (int a = 0; a < n_rows; ++a)
      elvec[static_cast<std::size_t>(a)] -= elmat[static_cast<std::size_t>(a) * n_cols + c] * u_fix;
  }
}

void Assembler::add_matrix(std::span<const double> elmat, const CellDofs& row_dofs,
                           const CellDofs& col_dofs) {
  const int n_rows = row_dofs.size();
  const int n_cols = col_dofs.size();
  if (static_cast<int>(elmat.size()) != n_rows * n_cols)
    throw std::invalid_argument("assembler: element matrix size mismatch");
  for (int a = 0; a < n_rows; ++a) {
    const int ra = row_dofs.ids[static_cast<std::size_t>(a)];
    if (ra < 0) continue;
    const int fa = row_dofs.field[static_cast<std::size_t>(a)];
    const int block_a = space_->block_of_field(fa);
    const int row = space_->block_row(fa, ra);
    for (int b = 0; b < n_cols; ++b) {
      const int cb = col_dofs.ids[static_cast<std::size_t>(b)];
      if (cb < 0) continue;
      const double v = elmat[static_cast<std::size_t>(a) * n_cols + b];
      if (v == 0.0) continue;
      const int fb = col_dofs.field[static_cast<std::size_t>(b)];
      if (!layout_.coupled(fa, fb)) continue;
      const int block_b = space_->block_of_field(fb);
      matrix_.block(block_a, block_b)
          .add(row, space_->block_row(fb, cb),
               row_dofs.signs[static_cast<std::size_t>(a)] * col_dofs.signs[static_cast<std::size_t>(b)] * v);
    }
  }
}

void Assembler::add_vector(std::span<const double> elvec, const CellDofs& row_dofs) {
  for (int a = 0; a < row_dofs.size(); ++a) {
    const int ra = row_dofs.ids[static_cast<std::size_t>(a)];
    if (ra < 0) continue;
    const int fa = row_dofs.field[static_cast<std::size_t>(a)];
    vector_.blocks[static_cast<std::size_t>(space_->block_of_field(fa))][space_->block_row(fa, ra)] +=
        row_dofs.signs[static_cast<std::size_t>(a)] * elvec[static_cast<std::size_t>(a)];
  }
}

void Assembler::assemble_cell(std::span<const double> elmat, std::span<const double> elvec,
                              const CellDofs& dofs, const FeFunction* dirichlet) {
  std::vector<double> lifted(elvec.begin(), elvec.end());
  lift_dirichlet(elmat, dofs, lifted, dirichlet);
  add_matrix(elmat, dofs, dofs);
  add_vector(lifted, dofs);
}

void Assembler::assemble_facet(std::span<const double> a_pp, std::span<const double> a_pm,
                               std::span<const double> a_mp, std::span<const double> a_mm,
                               std::span<double> v_p, std::span<double> v_m,
                               const CellDofs& dofs_plus, const CellDofs& dofs_minus,
                               const FeFunction* dirichlet) {
  lift_dirichlet(a_pp, dofs_plus, v_p, dirichlet);
  add_matrix(a_pp, dofs_plus, dofs_plus);
  if (dofs_minus.size() > 0) {
    lift_dirichlet(a_pm, dofs_minus, v_p, dirichlet);
    lift_dirichlet(a_mp, dofs_plus, v_m, dirichlet);
    lift_dirichlet(a_mm, dofs_minus, v_m, dirichlet);
    add_matrix(a_pm, dofs_plus, dofs_minus);
    add_matrix(a_mp, dofs_minus, dofs_plus);
    add_matrix(a_mm, dofs_minus, dofs_minus);
    add_vector(v_m, dofs_minus);
  }
  add_vector(v_p, dofs_plus);
}

}  // namespace fekit

#include "fekit/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "fekit/kernels.hpp"

namespace fekit {

SparseMatrix::SparseMatrix(int rows, int cols, bool symmetric_storage, bool symmetric,
                           MatrixSign sign)
    : rows_(rows), cols_(cols), symmetric_storage_(symmetric_storage), symmetric_(symmetric), sign_(sign) {
  if (symmetric_storage_ && rows_ != cols_)
    throw std::invalid_argument("sparse matrix: symmetric storage requires a square matrix");
}

void SparseMatrix::add(int row, int col, double value) {
  if (row < 0 || row >= rows_ || col < 0 || col >= cols_)
    throw std::out_of_range("sparse matrix: index out of range");
  if (symmetric_storage_ && row > col) std::swap(row, col);

  if (!compressed_) {
    // geometric growth of the triplet buffers is handled by std::vector
    coo_rows_.push_back(row);
    coo_cols_.push_back(col);
    coo_values_.push_back(value);
    return;
  }
  const int begin = row_ptr_[static_cast<std::size_t>(row)];
  const int end = row_ptr_[static_cast<std::size_t>(row) + 1];
  const auto first = col_ind_.begin() + begin;
  const auto last = col_ind_.begin() + end;
  const auto it = std::lower_bound(first, last, col);
  if (it == last || *it != col)
    throw std::runtime_error("sparse matrix: insertion outside the compressed pattern");
  values_[static_cast<std::size_t>(it - col_ind_.begin())] += value;
}

void SparseMatrix::compress() {
  if (compressed_) return;
  const std::size_t nnz_in = coo_values_.size();
  std::vector<std::size_t> order(nnz_in);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    if (coo_rows_[a] != coo_rows_[b]) return coo_rows_[a] < coo_rows_[b];
    return coo_cols_[a] < coo_cols_[b];
  });

  row_ptr_.assign(static_cast<std::size_t>(rows_) + 1, 0);
  col_ind_.clear();
  values_.clear();
  int last_row = -1;
  for (std::size_t k = 0; k < nnz_in; ++k) {
    const std::size_t i = order[k];
    if (!col_ind_.empty() && coo_rows_[i] == last_row && coo_cols_[i] == col_ind_.back()) {
      values_.back() += coo_values_[i];  // duplicated entries are summed up
      continue;
    }
    col_ind_.push_back(coo_cols_[i]);
    values_.push_back(coo_values_[i]);
    last_row = coo_rows_[i];
    ++row_ptr_[static_cast<std::size_t>(coo_rows_[i]) + 1];
  }
  for (std::size_t r = 1; r < row_ptr_.size(); ++r) row_ptr_[r] += row_ptr_[r - 1];
  coo_rows_.clear();
  coo_cols_.clear();
  coo_values_.clear();
  coo_rows_.shrink_to_fit();
  coo_cols_.shrink_to_fit();
  coo_values_.shrink_to_fit();
  compressed_ = true;
}

void SparseMatrix::zero_values() {
  if (!compressed_) {
    coo_rows_.clear();
    coo_cols_.clear();
    coo_values_.clear();
    return;
  }
  std::fill(values_.begin(), values_.end(), 0.0);
}

void SparseMatrix::matvec(const double* x, double* y) const {
  if (!compressed_) throw std::logic_error("sparse matrix: matvec requires compressed state");
  kernels::csr_spmv(row_ptr_.data(), col_ind_.data(), values_.data(), rows_, x, y);
  if (!symmetric_storage_) return;
  // mirror the strictly-upper entries
  for (int r = 0; r < rows_; ++r)
    for (int p = row_ptr_[static_cast<std::size_t>(r)]; p < row_ptr_[static_cast<std::size_t>(r) + 1]; ++p) {
      const int c = col_ind_[static_cast<std::size_t>(p)];
      if (c != r) y[c] += values_[static_cast<std::size_t>(p)] * x[r];
    }
}

std::vector<double> SparseMatrix::dense() const {
  if (!compressed_) throw std::logic_error("sparse matrix: dense() requires compressed state");
  std::vector<double> d(static_cast<std::size_t>(rows_) * cols_, 0.0);
  for (int r = 0; r < rows_; ++r)
    for (int p = row_ptr_[static_cast<std::size_t>(r)]; p < row_ptr_[static_cast<std::size_t>(r) + 1]; ++p) {
      const int c = col_ind_[static_cast<std::size_t>(p)];
      d[static_cast<std::size_t>(r) * cols_ + c] += values_[static_cast<std::size_t>(p)];
      if (symmetric_storage_ && c != r) d[static_cast<std::size_t>(c) * cols_ + r] += values_[static_cast<std::size_t>(p)];
    }
  return d;
}

std::vector<double> SparseMatrix::diagonal() const {
  if (!compressed_) throw std::logic_error("sparse matrix: diagonal() requires compressed state");
  std::vector<double> d(static_cast<std::size_t>(rows_), 0.0);
  for (int r = 0; r < rows_; ++r)
    for (int p = row_ptr_[static_cast<std::size_t>(r)]; p < row_ptr_[static_cast<std::size_t>(r) + 1]; ++p)
      if (col_ind_[static_cast<std::size_t>(p)] == r) d[static_cast<std::size_t>(r)] = values_[static_cast<std::size_t>(p)];
  return d;
}

double SparseMatrix::frobenius_diff(const SparseMatrix& other) const {
  const auto a = dense();
  const auto b = other.dense();
  if (a.size() != b.size()) throw std::invalid_argument("frobenius_diff: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

void SparseMatrix::dump_coordinate(std::ostream& out) const {
  if (!compressed_) throw std::logic_error("sparse matrix: dump requires compressed state");
  for (int r = 0; r < rows_; ++r)
    for (int p = row_ptr_[static_cast<std::size_t>(r)]; p < row_ptr_[static_cast<std::size_t>(r) + 1]; ++p)
      out << r + 1 << " " << col_ind_[static_cast<std::size_t>(p)] + 1 << " " << values_[static_cast<std::size_t>(p)] << "\n";
}

double VectorArray::norm2() const {
  return std::sqrt(kernels::dot(v.data(), v.data(), static_cast<int>(v.size())));
}

void BlockMatrix::compress() {
  for (auto& b : blocks)
    if (b.num_rows() > 0) b.compress();
}

void BlockMatrix::zero_values() {
  for (auto& b : blocks) b.zero_values();
}

SparseMatrix BlockMatrix::monolithic() const {
  std::vector<int> offsets(static_cast<std::size_t>(num_blocks) + 1, 0);
  for (int b = 0; b < num_blocks; ++b)
    offsets[static_cast<std::size_t>(b) + 1] = offsets[static_cast<std::size_t>(b)] + block(b, b).num_rows();
  SparseMatrix out(offsets.back(), offsets.back());
  for (int i = 0; i < num_blocks; ++i)
    for (int j = 0; j < num_blocks; ++j) {
      if (!is_coupled(i, j)) continue;
      const SparseMatrix& blk = block(i, j);
      const auto d = blk.dense();
      for (int r = 0; r < blk.num_rows(); ++r)
        for (int c = 0; c < blk.num_cols(); ++c) {
          const double v = d[static_cast<std::size_t>(r) * blk.num_cols() + c];
          if (v != 0.0) out.add(offsets[static_cast<std::size_t>(i)] + r, offsets[static_cast<std::size_t>(j)] + c, v);
        }
    }
  out.compress();
  return out;
}

VectorArray BlockVector::monolithic() const {
  VectorArray out;
  for (const auto& b : blocks) out.v.insert(out.v.end(), b.v.begin(), b.v.end());
  return out;
}

}  // namespace fekit

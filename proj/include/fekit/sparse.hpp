#pragma once

#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace fekit {

enum class MatrixSign { positive_definite, positive_semidefinite, indefinite };

/// Sparse matrix with a build-then-compress life cycle: entries are pushed
/// into coordinate triplets while building (duplicates simply accumulate),
/// and compress() converts to compressed-row storage with sorted columns and
/// summed duplicates. Afterwards additions may only touch the existing
/// pattern. Symmetric storage keeps the upper triangle only and redirects
/// lower-triangle insertions.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols, bool symmetric_storage = false, bool symmetric = false,
               MatrixSign sign = MatrixSign::indefinite);

  int num_rows() const { return rows_; }
  int num_cols() const { return cols_; }
  bool compressed() const { return compressed_; }
  bool symmetric_storage() const { return symmetric_storage_; }
  bool symmetric() const { return symmetric_; }
  MatrixSign sign() const { return sign_; }

  void add(int row, int col, double value);
  void compress();
  void zero_values();  // keep the pattern, reset values

  /// y = A x (symmetric storage expands the mirrored triangle).
  void matvec(const double* x, double* y) const;

  double frobenius_diff(const SparseMatrix& other) const;

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_ind() const { return col_ind_; }
  const std::vector<double>& values() const { return values_; }
  int num_nonzeros() const { return static_cast<int>(col_ind_.size()); }

  std::vector<double> dense() const;  // row major, mirrored if symmetric storage
  std::vector<double> diagonal() const;

  /// Coordinate text dump, 1-based "row col value" lines.
  void dump_coordinate(std::ostream& out) const;

 private:
  int rows_ = 0, cols_ = 0;
  bool symmetric_storage_ = false;
  bool symmetric_ = false;
  MatrixSign sign_ = MatrixSign::indefinite;
  bool compressed_ = false;
  std::vector<int> coo_rows_, coo_cols_;
  std::vector<double> coo_values_;
  std::vector<int> row_ptr_, col_ind_;
  std::vector<double> values_;
};

/// Flat vector with the handful of operations assembly and solvers need.
struct VectorArray {
  std::vector<double> v;

  VectorArray() = default;
  explicit VectorArray(int n) : v(static_cast<std::size_t>(n), 0.0) {}
  int size() const { return static_cast<int>(v.size()); }
  double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }
  void zero() { std::fill(v.begin(), v.end(), 0.0); }
  double norm2() const;
};

/// Block matrix: num_blocks^2 sparse blocks, uncoupled pairs left empty.
struct BlockMatrix {
  int num_blocks = 0;
  std::vector<SparseMatrix> blocks;  // row major
  std::vector<std::uint8_t> coupled;

  SparseMatrix& block(int i, int j) { return blocks[static_cast<std::size_t>(i * num_blocks + j)]; }
  const SparseMatrix& block(int i, int j) const {
    return blocks[static_cast<std::size_t>(i * num_blocks + j)];
  }
  bool is_coupled(int i, int j) const { return coupled[static_cast<std::size_t>(i * num_blocks + j)] != 0; }
  void compress();
  void zero_values();

  /// Assemble the blocks into one monolithic matrix (block-major numbering).
  SparseMatrix monolithic() const;
};

struct BlockVector {
  std::vector<VectorArray> blocks;
  void zero() {
    for (auto& b : blocks) b.zero();
  }
  /// Concatenation in block order.
  VectorArray monolithic() const;
};

}  // namespace fekit

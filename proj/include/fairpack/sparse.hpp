#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fairpack {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

// One stored non-zero as seen from a row (index = column) or a column
// (index = row).
struct Entry {
  std::size_t index;
  double value;

  friend bool operator==(const Entry&, const Entry&) = default;
};

// Immutable sparse matrix with both row-major and column-major access.
// Entries within a row are sorted by column, entries within a column by row.
// Explicit zeros are dropped and duplicated coordinates are summed.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  // Throws Error(NegativeEntry) for any negative value and Error(BadParam) for
  // out-of-range coordinates or non-finite values.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> triplets);
  static SparseMatrix from_dense(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return row_entries_.size(); }

  std::span<const Entry> row(std::size_t i) const {
    return {row_entries_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  std::span<const Entry> col(std::size_t j) const {
    return {col_entries_.data() + col_ptr_[j], col_ptr_[j + 1] - col_ptr_[j]};
  }

  // Linear scan of row i; 0 when (i, j) is not stored.
  double at(std::size_t i, std::size_t j) const;

  std::vector<Triplet> triplets() const;
  std::vector<std::vector<double>> to_dense() const;

  // y = A x
  std::vector<double> multiply(std::span<const double> x) const;
  // y = A^T lambda, accumulated row by row in ascending row order.
  std::vector<double> multiply_transpose(std::span<const double> lambda) const;
  double row_dot(std::size_t i, std::span<const double> x) const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<Entry> row_entries_;
  std::vector<std::size_t> col_ptr_{0};
  std::vector<Entry> col_entries_;
};

}  // namespace fairpack

#include "fairpack/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fairpack/errors.hpp"

namespace fairpack {

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row >= rows || t.col >= cols) {
      throw Error(ErrorCode::BadParam,
                  "entry (" + std::to_string(t.row) + "," +
                      std::to_string(t.col) + ") outside a " +
                      std::to_string(rows) + "x" + std::to_string(cols) +
                      " matrix");
    }
    if (!std::isfinite(t.value)) {
      throw Error(ErrorCode::BadParam, "non-finite entry at (" +
                                           std::to_string(t.row) + "," +
                                           std::to_string(t.col) + ")");
    }
    if (t.value < 0.0) {
      throw Error(ErrorCode::NegativeEntry,
                  "A(" + std::to_string(t.row) + "," + std::to_string(t.col) +
                      ") = " + std::to_string(t.value));
    }
  }

  std::stable_sort(triplets.begin(), triplets.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });

  SparseMatrix a;
  a.rows_ = rows;
  a.cols_ = cols;
  a.row_ptr_.assign(rows + 1, 0);

  // Merge duplicates in input order, then drop zeros.
  std::vector<Triplet> merged;
  merged.reserve(triplets.size());
  for (const auto& t : triplets) {
    if (!merged.empty() && merged.back().row == t.row &&
        merged.back().col == t.col) {
      merged.back().value += t.value;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Triplet& t) { return t.value == 0.0; });

  a.row_entries_.reserve(merged.size());
  for (const auto& t : merged) {
    a.row_entries_.push_back({t.col, t.value});
    ++a.row_ptr_[t.row + 1];
  }
  for (std::size_t i = 0; i < rows; ++i) a.row_ptr_[i + 1] += a.row_ptr_[i];

  a.col_ptr_.assign(cols + 1, 0);
  for (const auto& t : merged) ++a.col_ptr_[t.col + 1];
  for (std::size_t j = 0; j < cols; ++j) a.col_ptr_[j + 1] += a.col_ptr_[j];
  a.col_entries_.resize(merged.size());
  std::vector<std::size_t> fill(a.col_ptr_.begin(), a.col_ptr_.end() - 1);
  // merged is row-sorted, so each column receives its rows in ascending order.
  for (const auto& t : merged) a.col_entries_[fill[t.col]++] = {t.row, t.value};
  return a;
}

SparseMatrix SparseMatrix::from_dense(
    const std::vector<std::vector<double>>& rows) {
  const std::size_t m = rows.size();
  const std::size_t n = m == 0 ? 0 : rows.front().size();
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < m; ++i) {
    if (rows[i].size() != n) {
      throw Error(ErrorCode::BadParam, "ragged dense matrix");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (rows[i][j] != 0.0) t.push_back({i, j, rows[i][j]});
    }
  }
  return from_triplets(m, n, std::move(t));
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  for (const auto& e : row(i)) {
    if (e.index == j) return e.value;
  }
  return 0.0;
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (const auto& e : row(i)) out.push_back({i, e.index, e.value});
  }
  return out;
}

std::vector<std::vector<double>> SparseMatrix::to_dense() const {
  std::vector<std::vector<double>> d(rows_, std::vector<double>(cols_, 0.0));
  for (std::size_t i = 0; i < rows_; ++i) {
    for (const auto& e : row(i)) d[i][e.index] = e.value;
  }
  return d;
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) y[i] = row_dot(i, x);
  return y;
}

std::vector<double> SparseMatrix::multiply_transpose(
    std::span<const double> lambda) const {
  std::vector<double> h(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double w = lambda[i];
    if (w == 0.0) continue;
    for (const auto& e : row(i)) h[e.index] += w * e.value;
  }
  return h;
}

double SparseMatrix::row_dot(std::size_t i, std::span<const double> x) const {
  double s = 0.0;
  for (const auto& e : row(i)) s += e.value * x[e.index];
  return s;
}

}  // namespace fairpack

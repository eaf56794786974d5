#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fairpack/sparse.hpp"

namespace fairpack {

// A column-normalized packing instance: max_i A_ij = 1 for every column j.
//
// The instance remembers how it was obtained from the caller's raw matrix:
// column j of the raw matrix was divided by col_scale[j], which maps a raw
// allocation x to the normalized allocation x'_j = col_scale[j] * x_j and
// shifts the log-utility by objective_offset = -sum_j log col_scale[j].
//
// Instances are immutable once built and may be shared between threads.
class ProblemInstance {
 public:
  const SparseMatrix& matrix() const { return matrix_; }
  std::size_t rows() const { return matrix_.rows(); }
  std::size_t cols() const { return matrix_.cols(); }
  std::size_t nnz() const { return matrix_.nnz(); }

  std::span<const double> col_scale() const { return col_scale_; }
  double objective_offset() const { return objective_offset_; }
  // max A_ij / min_{A_ij != 0} A_ij. Diagnostic only; no solver reads it.
  double width() const { return width_; }

  // Maps a normalized allocation back to the raw problem's variables.
  std::vector<double> to_raw_allocation(std::span<const double> x) const;

  friend bool operator==(const ProblemInstance&,
                         const ProblemInstance&) = default;

 private:
  friend ProblemInstance normalize_columns(const SparseMatrix&,
                                           std::span<const double>);
  friend struct AugmentedInstance augment_with_box_rows(const ProblemInstance&);

  SparseMatrix matrix_;
  std::vector<double> col_scale_;
  double objective_offset_ = 0.0;
  double width_ = 1.0;
};

// Divides every column by its largest entry. `prior_scale`, when non-empty,
// is a scale already applied to `raw`; the result composes both so that
// normalize_columns(normalize_columns(A)) == normalize_columns(A).
//
// Throws Error(EmptyColumn) if a column has no positive entry. Negative
// entries are rejected when the SparseMatrix is built.
ProblemInstance normalize_columns(const SparseMatrix& raw,
                                  std::span<const double> prior_scale = {});
ProblemInstance normalize_columns(const ProblemInstance& inst);

struct AugmentedInstance {
  ProblemInstance instance;
  // origin[i] is the row of the input instance that row i came from, or
  // nullopt for a prepended unit row.
  std::vector<std::optional<std::size_t>> origin;
};

// True when rows 0..n-1 are e_1..e_n.
bool has_box_rows(const ProblemInstance& inst);

// Ensures the first n rows are e_1..e_n (the implied bounds x_j <= 1),
// prepending them when they are not already there.
AugmentedInstance augment_with_box_rows(const ProblemInstance& inst);

// Synthetic instance: each (i, j) is non-zero with probability `density`,
// values log-uniform on [1/rho, 1]; every column receives at least one entry.
// Deterministic in `seed` on every platform.
ProblemInstance generate_random(std::size_t n, std::size_t m, double rho,
                                std::uint64_t seed, double density = 0.5);

// sum_j log x_j, the proportional-fairness utility.
double log_utility(std::span<const double> x);

// max_i (A x)_i - 1; non-positive iff x is feasible.
double max_constraint_violation(const ProblemInstance& inst,
                                std::span<const double> x);

}  // namespace fairpack

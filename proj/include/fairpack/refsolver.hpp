#pragma once

#include <span>
#include <vector>

#include "fairpack/instance.hpp"

namespace fairpack {

// High-accuracy solution of small instances by a primal-dual interior-point
// method.
struct ReferenceSolution {
  std::vector<double> x_star;
  std::vector<double> lambda_star;  // in the simplex over the rows of A
  double f_star = 0.0;              // sum log x*, normalized instance
  double g_star = 0.0;              // dual objective at lambda*
  // max of |x_j (A^T y)_j - 1| and y_i (1 - A_i x), y the unscaled multipliers
  double kkt_residual = 0.0;
  int newton_steps = 0;
};

inline constexpr std::size_t kReferenceMaxCols = 12;
inline constexpr std::size_t kReferenceMaxRows = 40;

// Throws Error(ScaleTooLarge) above 12 columns or 40 rows and
// Error(NotConverged) if |f* - g*| > 1e-6 at the end.
ReferenceSolution reference_solve(const ProblemInstance& inst);

struct DualityReport {
  double f = 0.0;    // sum log xbar
  double g = 0.0;    // g(lambda_bar)
  double gap = 0.0;  // g - f
  double primal_residual = 0.0;  // max_i (A xbar)_i - 1
  double simplex_residual = 0.0; // |sum lambda - 1|
};

// Certificate from a primal/dual pair on the same (normalized) instance.
// Throws InfeasiblePrimal if xbar <= 0 somewhere or violates Ax <= 1 by more
// than 1e-9; DegenerateDual if lambda is not in the simplex or A^T lambda
// has a zero.
DualityReport duality_report(const ProblemInstance& inst,
                             std::span<const double> xbar,
                             std::span<const double> lambda_bar);

}  // namespace fairpack

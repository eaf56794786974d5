#pragma once

// Per-coordinate pieces of the primal iteration. The centralized solver and
// the distributed simulation both call these so their outputs agree bitwise.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include "fairpack/sparse.hpp"

namespace fairpack::kernel {

// exp() of anything above this is treated as saturated.
inline constexpr double kLogCutoff = 700.0;

inline double eta_next(double eta, double tau) { return eta / (1.0 - tau); }

inline double couple(double z, double y, double tau) {
  return tau * z + (1.0 - tau) * y;
}

// Rounding can push a convex combination of box points a few ulps out of the
// box; pull it back and remember how far it went.
inline double clamp_box(double v, double omega, double& excursion) {
  if (v > 0.0) {
    excursion = std::max(excursion, v);
    return 0.0;
  }
  if (v < -omega) {
    excursion = std::max(excursion, -omega - v);
    return -omega;
  }
  return v;
}

// log of s_i^(1/beta), from the slack s_i - 1 a constraint reports.
inline double row_log_weight(double slack, double beta) {
  return std::log1p(slack) / beta;
}

inline double row_weight(double log_weight) {
  return log_weight <= kLogCutoff ? std::exp(log_weight)
                                  : std::numeric_limits<double>::infinity();
}

// min{1, -1 + sum_i s_i^(1/beta) a_ij exp(x_j)} over the entries of column j.
// log_weight_of(k) / weight_of(k) give the row terms for the k-th entry.
template <class LogWeightOf, class WeightOf>
double truncated_gradient_column(std::span<const Entry> col,
                                 LogWeightOf&& log_weight_of,
                                 WeightOf&& weight_of, double xj, double exp_xj) {
  double acc = 0.0;
  bool saturated = false;
  for (std::size_t k = 0; k < col.size(); ++k) {
    if (log_weight_of(k) > kLogCutoff) {
      saturated = true;
      break;
    }
    acc += weight_of(k) * col[k].value;
  }
  if (!saturated) return std::min(1.0, acc * exp_xj - 1.0);

  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < col.size(); ++k) {
    top = std::max(top, log_weight_of(k) + std::log(col[k].value) + xj);
  }
  if (top >= std::log(2.0)) return 1.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < col.size(); ++k) {
    sum += std::exp(log_weight_of(k) + std::log(col[k].value) + xj - top);
  }
  return std::min(1.0, std::exp(top + std::log(sum)) - 1.0);
}

inline double mirror(double z_prev, double g, double eta, double omega) {
  return std::clamp(z_prev - omega * eta * g, -omega, 0.0);
}

inline double gradient_step(double x, double z, double z_prev, double eta,
                            double L) {
  return x + (z - z_prev) / (eta * L);
}

}  // namespace fairpack::kernel

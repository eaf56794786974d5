#include "fairpack/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "fairpack/errors.hpp"

namespace fairpack {
namespace {

double compute_width(const SparseMatrix& a) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (const auto& e : a.row(i)) {
      lo = std::min(lo, e.value);
      hi = std::max(hi, e.value);
    }
  }
  return a.nnz() == 0 ? 1.0 : hi / lo;
}

// 53 random mantissa bits; std::uniform_real_distribution is not portable.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<double> ProblemInstance::to_raw_allocation(
    std::span<const double> x) const {
  std::vector<double> raw(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) raw[j] = x[j] / col_scale_[j];
  return raw;
}

ProblemInstance normalize_columns(const SparseMatrix& raw,
                                  std::span<const double> prior_scale) {
  const std::size_t n = raw.cols();
  if (!prior_scale.empty() && prior_scale.size() != n) {
    throw Error(ErrorCode::BadParam, "prior scale has wrong length");
  }
  std::vector<double> col_max(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& e : raw.col(j)) col_max[j] = std::max(col_max[j], e.value);
    if (!(col_max[j] > 0.0)) {
      throw Error(ErrorCode::EmptyColumn,
                  "column " + std::to_string(j) +
                      " has no positive entry; the problem is unbounded");
    }
  }

  std::vector<Triplet> t = raw.triplets();
  for (auto& e : t) e.value /= col_max[e.col];

  ProblemInstance inst;
  inst.matrix_ = SparseMatrix::from_triplets(raw.rows(), n, std::move(t));
  inst.col_scale_ = col_max;
  if (!prior_scale.empty()) {
    for (std::size_t j = 0; j < n; ++j) inst.col_scale_[j] *= prior_scale[j];
  }
  double log_sum = 0.0;
  for (double s : inst.col_scale_) log_sum += std::log(s);
  inst.objective_offset_ = -log_sum;
  inst.width_ = compute_width(inst.matrix_);
  return inst;
}

ProblemInstance normalize_columns(const ProblemInstance& inst) {
  return normalize_columns(inst.matrix(), inst.col_scale());
}

bool has_box_rows(const ProblemInstance& inst) {
  const SparseMatrix& a = inst.matrix();
  if (a.rows() < a.cols()) return false;
  for (std::size_t i = 0; i < a.cols(); ++i) {
    auto r = a.row(i);
    if (r.size() != 1 || r[0].index != i || r[0].value != 1.0) return false;
  }
  return true;
}

AugmentedInstance augment_with_box_rows(const ProblemInstance& inst) {
  const SparseMatrix& a = inst.matrix();
  const std::size_t n = a.cols();
  const std::size_t m = a.rows();

  AugmentedInstance out;
  if (has_box_rows(inst)) {
    out.instance = inst;
    out.origin.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.origin[i] = i;
    return out;
  }

  std::vector<Triplet> t;
  t.reserve(a.nnz() + n);
  for (std::size_t j = 0; j < n; ++j) t.push_back({j, j, 1.0});
  for (const auto& e : a.triplets()) t.push_back({e.row + n, e.col, e.value});

  out.instance = inst;
  out.instance.matrix_ = SparseMatrix::from_triplets(m + n, n, std::move(t));
  out.instance.width_ = compute_width(out.instance.matrix_);
  out.origin.assign(n, std::nullopt);
  for (std::size_t i = 0; i < m; ++i) out.origin.push_back(i);
  return out;
}

ProblemInstance generate_random(std::size_t n, std::size_t m, double rho,
                                std::uint64_t seed, double density) {
  if (n < 1 || m < 1) {
    throw Error(ErrorCode::BadParam, "n and m must be at least 1");
  }
  if (!(rho >= 1.0) || !std::isfinite(rho)) {
    throw Error(ErrorCode::BadParam, "rho must be a finite value >= 1");
  }
  if (!(density > 0.0 && density <= 1.0)) {
    throw Error(ErrorCode::BadParam, "density must lie in (0, 1]");
  }

  std::mt19937_64 rng(seed);
  const double log_rho = std::log(rho);
  auto draw_value = [&] { return std::exp(-uniform01(rng) * log_rho); };

  std::vector<Triplet> t;
  for (std::size_t j = 0; j < n; ++j) {
    bool any = false;
    for (std::size_t i = 0; i < m; ++i) {
      if (uniform01(rng) < density) {
        t.push_back({i, j, draw_value()});
        any = true;
      }
    }
    if (!any) t.push_back({static_cast<std::size_t>(rng() % m), j, draw_value()});
  }
  return normalize_columns(SparseMatrix::from_triplets(m, n, std::move(t)));
}

double log_utility(std::span<const double> x) {
  double f = 0.0;
  for (double v : x) f += std::log(v);
  return f;
}

double max_constraint_violation(const ProblemInstance& inst,
                                std::span<const double> x) {
  double worst = -1.0;
  for (std::size_t i = 0; i < inst.rows(); ++i) {
    worst = std::max(worst, inst.matrix().row_dot(i, x) - 1.0);
  }
  return worst;
}

}  // namespace fairpack

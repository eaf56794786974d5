#pragma once

// Helpers shared by the unit and acceptance tests: seeded random data and
// small dense reference computations that do not touch the library kernels.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fairpack/instance.hpp"
#include "fairpack/sparse.hpp"

namespace fairpack::testing {

using Dense = std::vector<std::vector<double>>;

inline Dense dense(const ProblemInstance& inst) { return inst.matrix().to_dense(); }

inline ProblemInstance from_rows(const Dense& rows) {
  return normalize_columns(SparseMatrix::from_dense(rows));
}

// Shapes used across the suites: n in [2, max_n], m in [n, max_m].
struct Shape {
  std::size_t n;
  std::size_t m;
};

inline Shape shape_for(std::uint64_t seed, std::size_t max_n, std::size_t max_m) {
  std::mt19937_64 rng(seed * 7919 + 17);
  const std::size_t n = 2 + rng() % (max_n - 1);
  const std::size_t lo = std::min(n, max_m);
  const std::size_t m = lo + rng() % (max_m - lo + 1);
  return {n, m};
}

inline std::vector<double> uniform_vec(std::mt19937_64& rng, std::size_t k,
                                       double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(k);
  for (auto& x : v) x = d(rng);
  return v;
}

inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t k) {
  std::exponential_distribution<double> d(1.0);
  std::vector<double> v(k);
  double s = 0.0;
  for (auto& x : v) s += (x = d(rng));
  for (auto& x : v) x /= s;
  return v;
}

// Dense f_r(x) evaluated in long double, straight from the definition.
inline long double dense_fr(const Dense& a, const std::vector<double>& x,
                            double beta) {
  long double val = 0.0L;
  for (double v : x) val -= v;
  const long double p = (1.0L + beta) / beta;
  long double bar = 0.0L;
  for (const auto& row : a) {
    long double s = 0.0L;
    for (std::size_t j = 0; j < x.size(); ++j) s += row[j] * std::exp((long double)x[j]);
    bar += std::pow(s, p);
  }
  return val + beta / (1.0L + beta) * bar;
}

inline std::vector<long double> dense_grad(const Dense& a,
                                           const std::vector<double>& x,
                                           double beta) {
  std::vector<long double> g(x.size(), -1.0L);
  for (const auto& row : a) {
    long double s = 0.0L;
    for (std::size_t j = 0; j < x.size(); ++j) s += row[j] * std::exp((long double)x[j]);
    const long double w = std::pow(s, 1.0L / beta);
    for (std::size_t j = 0; j < x.size(); ++j) {
      g[j] += w * row[j] * std::exp((long double)x[j]);
    }
  }
  return g;
}

inline double dense_row_dot(const std::vector<double>& row,
                            const std::vector<double>& p) {
  double s = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) s += row[j] * p[j];
  return s;
}

inline double dense_ghat(const Dense& a, const std::vector<double>& p) {
  double best = -INFINITY;
  for (const auto& row : a) best = std::max(best, dense_row_dot(row, p));
  return best;
}

inline std::vector<double> dense_AT(const Dense& a, const std::vector<double>& lambda) {
  std::vector<double> h(a.empty() ? 0 : a[0].size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < h.size(); ++j) h[j] += lambda[i] * a[i][j];
  }
  return h;
}

}  // namespace fairpack::testing

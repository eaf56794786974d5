#include "fairpack/ylstage.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "fairpack/dual.hpp"
#include "fairpack/errors.hpp"

namespace fairpack {
namespace {

double log_volume_of(const std::vector<double>& h) {
  double v = -std::lgamma(static_cast<double>(h.size()) + 1.0);
  for (double x : h) v -= std::log(x);
  return v;
}

// Largest <A_i, p>; smallest index wins ties.
std::pair<std::size_t, double> most_violated(const SparseMatrix& a,
                                             const std::vector<double>& p) {
  std::size_t best = 0;
  double val = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double v = a.row_dot(i, p);
    if (v > val) {
      val = v;
      best = i;
    }
  }
  return {best, val};
}

}  // namespace

YlState yl_initial(const ProblemInstance& inst) {
  const SparseMatrix& a = inst.matrix();
  const std::size_t n = a.cols();
  YlState st;
  st.lambda.assign(a.rows(), 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t best = 0;
    double val = -1.0;
    for (const auto& e : a.col(j)) {  // rows ascending
      if (e.value > val) {
        val = e.value;
        best = e.index;
      }
    }
    st.lambda[best] += 1.0 / static_cast<double>(n);
  }
  st.h = a.multiply_transpose(st.lambda);
  st.p = centroid(st.h);
  st.log_volume = log_volume_of(st.h);
  return st;
}

std::uint64_t yl_default_cap(std::size_t n) {
  const double nd = static_cast<double>(n);
  return static_cast<std::uint64_t>(
             std::ceil(2.0 * (nd + 1.0) * (nd + 1.0) * nd * std::log(nd))) +
         1;
}

YlResult yl_stage(const ProblemInstance& inst, const YlOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const SparseMatrix& a = inst.matrix();
  const std::size_t n = a.cols();
  const double nd = static_cast<double>(n);
  const double mix = 1.0 / (nd * nd);
  const std::uint64_t cap = opts.iter_cap.value_or(yl_default_cap(n));

  YlResult res;
  YlState& st = res.state;
  st = yl_initial(inst);
  res.worst_log_ratio = -std::numeric_limits<double>::infinity();

  if (opts.trace) *opts.trace << "k,row,ghat,log_volume\n";

  auto [row, ghat] = most_violated(a, st.p);
  while (ghat > 1.0 + 1.0 / nd) {
    if (st.k >= cap) {
      throw Error(ErrorCode::IterCapExceeded,
                  "YL stage did not finish within " + std::to_string(cap) +
                      " iterations");
    }
    ++st.k;
    for (double& l : st.lambda) l *= 1.0 - mix;
    st.lambda[row] += mix;

    std::vector<double> h_new(n);
    for (std::size_t j = 0; j < n; ++j) h_new[j] = (1.0 - mix) * st.h[j];
    for (const auto& e : a.row(row)) h_new[e.index] += mix * e.value;
    double log_ratio = 0.0;
    for (std::size_t j = 0; j < n; ++j) log_ratio -= std::log(h_new[j] / st.h[j]);
    st.h = std::move(h_new);
    st.p = centroid(st.h);
    st.log_volume = log_volume_of(st.h);
    res.worst_log_ratio = std::max(res.worst_log_ratio, log_ratio);

    if (opts.keep_steps) {
      res.steps.push_back({st.k, row, ghat, st.log_volume, log_ratio});
    }
    if (opts.trace) {
      *opts.trace << st.k << ',' << row << ',' << ghat << ',' << st.log_volume
                  << '\n';
    }
    std::tie(row, ghat) = most_violated(a, st.p);
  }
  res.proxy = ghat;

  SolveReport& r = res.report;
  r.solver = "yl";
  r.n = n;
  r.m = a.rows();
  r.nnz = a.nnz();
  r.iterations = st.k;
  const double g = dual_objective(inst, st.lambda);
  r.objective_normalized = g;
  r.objective = g + inst.objective_offset();
  r.proxy_value = ghat;
  r.residual = ghat - 1.0;
  r.log_volume = st.log_volume;
  r.solution = st.lambda;
  r.wall_time_s = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  return res;
}

}  // namespace fairpack

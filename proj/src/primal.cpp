#include "fairpack/primal.hpp"

#include <cassert>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "fairpack/errors.hpp"
#include "primal_kernels.hpp"

namespace fairpack {
namespace {

std::vector<double> loads(const SparseMatrix& a, std::span<const double> x) {
  std::vector<double> ex(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) ex[j] = std::exp(x[j]);
  return a.multiply(ex);
}

}  // namespace

PrimalParams derive_params(std::size_t n, std::size_t m, double eps) {
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  if (n == 0 || m == 0) throw Error(ErrorCode::BadParam, "empty instance");
  if (!(eps > 0.0 && eps <= nd / 2.0)) {
    throw Error(ErrorCode::EpsOutOfRange,
                "eps must lie in (0, n/2] = (0, " + std::to_string(nd / 2.0) +
                    "]");
  }
  PrimalParams p;
  p.n = n;
  p.m = m;
  p.eps = eps;
  p.beta = eps / (6.0 * nd * std::log(2.0 * md * nd * nd / eps));
  p.omega = std::log(md * nd / (1.0 - eps / nd));
  p.L = std::max(4.0 * p.omega * (1.0 + p.beta) / p.beta,
                 16.0 * nd * std::log(2.0 * md * nd) / (3.0 * eps) + 1.0 / 3.0);
  p.tau = 1.0 / (3.0 * p.L);
  p.eta0 = 1.0 / (3.0 * p.L);
  const double iters = std::log(4.0 * nd * std::log(2.0 * md * nd) / eps) /
                       -std::log1p(-p.tau);
  p.T = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(iters)));
  return p;
}

PrimalParams derive_params(const ProblemInstance& inst, double eps) {
  return derive_params(inst.cols(), inst.rows(), eps);
}

RegularizedValue regularized_objective(const ProblemInstance& inst,
                                       std::span<const double> x,
                                       double beta) {
  RegularizedValue out;
  double lin = 0.0;
  for (double v : x) lin -= v;
  const double power = (1.0 + beta) / beta;
  double barrier = 0.0;
  for (double s : loads(inst.matrix(), x)) {
    const double e = power * std::log(s);
    if (e > kernel::kLogCutoff) {
      out.saturated = true;
      out.value = std::numeric_limits<double>::infinity();
      return out;
    }
    barrier += std::exp(e);
  }
  out.value = lin + beta / (1.0 + beta) * barrier;
  return out;
}

std::vector<double> regularized_gradient(const ProblemInstance& inst,
                                         std::span<const double> x,
                                         double beta) {
  const SparseMatrix& a = inst.matrix();
  std::vector<double> s = loads(a, x);
  std::vector<double> g(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    double acc = 0.0;
    for (const auto& e : a.col(j)) {
      acc += std::exp(std::log(s[e.index]) / beta + std::log(e.value) + x[j]);
    }
    g[j] = acc - 1.0;
  }
  return g;
}

std::vector<double> truncated_gradient(const ProblemInstance& inst,
                                       std::span<const double> x,
                                       double beta) {
  const SparseMatrix& a = inst.matrix();
  std::vector<double> s = loads(a, x);
  std::vector<double> logw(s.size()), w(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    logw[i] = kernel::row_log_weight(s[i] - 1.0, beta);
    w[i] = kernel::row_weight(logw[i]);
  }
  std::vector<double> g(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    auto col = a.col(j);
    g[j] = kernel::truncated_gradient_column(
        col, [&](std::size_t k) { return logw[col[k].index]; },
        [&](std::size_t k) { return w[col[k].index]; }, x[j], std::exp(x[j]));
  }
  return g;
}

std::vector<double> mirror_step(std::span<const double> z_prev,
                                std::span<const double> gbar, double eta_k,
                                double omega) {
  std::vector<double> z(z_prev.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    z[j] = kernel::mirror(z_prev[j], gbar[j], eta_k, omega);
  }
  return z;
}

std::vector<double> postprocess(std::span<const double> y_T, double eps,
                                std::size_t n) {
  const double shrink = 1.0 + eps / static_cast<double>(n);
  std::vector<double> x(y_T.size());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = std::exp(y_T[j]) / shrink;
  return x;
}

PrimalResult solve_primal(const ProblemInstance& inst, double eps,
                          const PrimalOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const PrimalParams P = derive_params(inst, eps);
  const SparseMatrix& a = inst.matrix();
  const std::size_t n = P.n, m = P.m;

  PrimalState st;
  st.x.assign(n, -P.omega);
  st.y.assign(n, -P.omega);
  st.z.assign(n, -P.omega);
  st.gbar.assign(n, 0.0);
  st.eta_k = P.eta0;

  std::vector<double> ex(n), logw(m), w(m);
  double excursion = 0.0;

  if (opts.trace) *opts.trace << "k,f_r,max_residual\n";

  for (std::uint64_t k = 1; k <= P.T; ++k) {
    st.k = k;
    st.eta_k = kernel::eta_next(st.eta_k, P.tau);
    assert(st.eta_k <= 0.25 + 1e-12);

    for (std::size_t j = 0; j < n; ++j) {
      st.x[j] = kernel::clamp_box(kernel::couple(st.z[j], st.y[j], P.tau),
                                  P.omega, excursion);
      ex[j] = std::exp(st.x[j]);
    }
    for (std::size_t i = 0; i < m; ++i) {
      double acc = 0.0;
      for (const auto& e : a.row(i)) acc += e.value * ex[e.index];
      logw[i] = kernel::row_log_weight(acc - 1.0, P.beta);
      w[i] = kernel::row_weight(logw[i]);
    }
    for (std::size_t j = 0; j < n; ++j) {
      auto col = a.col(j);
      const double g = kernel::truncated_gradient_column(
          col, [&](std::size_t q) { return logw[col[q].index]; },
          [&](std::size_t q) { return w[col[q].index]; }, st.x[j], ex[j]);
      st.gbar[j] = g;
      const double z_new = kernel::mirror(st.z[j], g, st.eta_k, P.omega);
      st.y[j] = kernel::clamp_box(
          kernel::gradient_step(st.x[j], z_new, st.z[j], st.eta_k, P.L),
          P.omega, excursion);
      st.z[j] = z_new;
    }

    if (opts.observer) {
      st.C_k = 3.0 * st.eta_k * P.L;
      opts.observer(st);
    }
    if (opts.trace) {
      const auto fr = regularized_objective(inst, st.y, P.beta);
      double worst = -std::numeric_limits<double>::infinity();
      for (double s : loads(a, st.y)) worst = std::max(worst, s - 1.0);
      *opts.trace << k << ',' << fr.value << ',' << worst << '\n';
    }
  }

  PrimalResult res;
  res.params = P;
  res.y_final = st.y;
  res.xbar = postprocess(st.y, eps, n);

  SolveReport& r = res.report;
  r.solver = "primal";
  r.eps = eps;
  r.n = n;
  r.m = m;
  r.nnz = inst.nnz();
  r.iterations = P.T;
  const double f = log_utility(res.xbar);
  r.objective_normalized = f;
  r.objective = f + inst.objective_offset();
  r.residual = max_constraint_violation(inst, res.xbar);
  const auto fr = regularized_objective(inst, st.y, P.beta);
  r.final_fr = fr.value;
  r.max_box_excursion = excursion;
  r.solution = inst.to_raw_allocation(res.xbar);
  r.wall_time_s = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  return res;
}

}  // namespace fairpack

#include "fairpack/dual.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "fairpack/errors.hpp"

namespace fairpack {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// <s, c(h)> = sum_j s_j / (n h_j); +inf if some h_j <= 0.
double dot_centroid(std::span<const double> s, std::span<const double> h) {
  const double n = static_cast<double>(h.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (!(h[j] > 0.0)) return kInf;
    acc += s[j] / (n * h[j]);
  }
  return acc;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) acc += a[j] * b[j];
  return acc;
}

void centroid_into(std::span<const double> h, std::span<double> out) {
  const double n = static_cast<double>(h.size());
  for (std::size_t j = 0; j < h.size(); ++j) out[j] = 1.0 / (n * h[j]);
}

struct CoreOutcome {
  OracleBranch branch = OracleBranch::Query;
  double mu = 0.0;
  std::size_t iters = 0;
};

// Shared by the public oracle and the solver loop. Writes the output point
// into `o`; `mix` is scratch of size n.
CoreOutcome oracle_core(std::span<const double> s, std::span<const double> p_s,
                        std::span<const double> q, double delta, double omega,
                        std::span<double> o, std::span<double> mix,
                        std::vector<double>* identity_residuals) {
  const std::size_t n = s.size();
  const double upper = (1.0 + omega * delta) / (1.0 + delta);
  CoreOutcome out;

  if (dot_centroid(s, q) <= upper) {
    out.branch = OracleBranch::Query;
    out.mu = 1.0;
    centroid_into(q, o);
    return out;
  }
  if (dot(q, p_s) <= 1.0) {
    out.branch = OracleBranch::Current;
    out.mu = 0.0;
    std::copy(p_s.begin(), p_s.end(), o.begin());
    return out;
  }

  out.branch = OracleBranch::Bisection;
  const std::size_t cap = bisection_cap(n, delta, omega);
  double lo = 0.0, hi = 1.0;
  for (;;) {
    if (out.iters >= cap) {
      throw Error(ErrorCode::BisectionStall,
                  "oracle bisection did not land in the lens after " +
                      std::to_string(out.iters) + " steps");
    }
    ++out.iters;
    const double mu = 0.5 * (lo + hi);
    for (std::size_t j = 0; j < n; ++j) mix[j] = (1.0 - mu) * s[j] + mu * q[j];
    const double pi_s = dot_centroid(s, mix);
    if (identity_residuals) {
      const double pi_q = dot_centroid(q, mix);
      identity_residuals->push_back(
          std::abs((1.0 - mu) * pi_s + mu * pi_q - 1.0));
    }
    if (pi_s <= 1.0) {
      lo = mu;
    } else if (pi_s >= upper) {
      hi = mu;
    } else {
      out.mu = mu;
      centroid_into(mix, o);
      return out;
    }
  }
}

}  // namespace

DualPoint DualPoint::from_lambda(const ProblemInstance& inst,
                                 std::vector<double> lambda) {
  DualPoint d;
  d.h = inst.matrix().multiply_transpose(lambda);
  d.p = centroid(d.h);
  d.lambda = std::move(lambda);
  return d;
}

std::vector<double> centroid(std::span<const double> h) {
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (!(h[j] > 0.0)) {
      throw Error(ErrorCode::NonPositiveConstraint,
                  "constraint coefficient " + std::to_string(j) +
                      " is not positive");
    }
  }
  std::vector<double> p(h.size());
  centroid_into(h, p);
  return p;
}

double proxy_value(const ProblemInstance& inst, std::span<const double> p) {
  double best = -kInf;
  for (std::size_t i = 0; i < inst.rows(); ++i) {
    best = std::max(best, inst.matrix().row_dot(i, p));
  }
  return best;
}

double dual_objective(const ProblemInstance& inst,
                      std::span<const double> lambda) {
  const auto h = inst.matrix().multiply_transpose(lambda);
  const double n = static_cast<double>(h.size());
  double g = -n * std::log(n);
  for (double v : h) {
    if (!(v > 0.0)) {
      throw Error(ErrorCode::DegenerateDual,
                  "A^T lambda has a non-positive entry");
    }
    g -= std::log(v);
  }
  return g;
}

WidthParams width_params(double delta, std::size_t n,
                         std::span<const double> h_s, double lens_omega) {
  const double dn = lens_omega * delta * static_cast<double>(n);
  WidthParams w;
  if (delta <= 2.0) {
    w.sigma = std::sqrt(dn) + dn;
  } else {
    double inv = 0.0;
    for (double v : h_s) inv = std::max(inv, 1.0 / v);
    w.sigma = (1.0 + lens_omega * delta) / (1.0 + delta) * inv - 1.0;
  }
  w.tau_w = std::min(3.0 * std::sqrt(dn), 1.0);
  return w;
}

double filter_threshold(double eps_prev, std::size_t n, double lens_omega) {
  const double dn = lens_omega * eps_prev * static_cast<double>(n);
  return (1.0 + eps_prev) / (1.0 + dn + std::sqrt(dn));
}

std::vector<std::size_t> filter_constraints(const ProblemInstance& inst,
                                            std::span<const double> p_current,
                                            double eps_prev,
                                            double lens_omega) {
  const double thr = filter_threshold(eps_prev, inst.cols(), lens_omega);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < inst.rows(); ++i) {
    if (inst.matrix().row_dot(i, p_current) >= thr) keep.push_back(i);
  }
  return keep;
}

std::size_t bisection_cap(std::size_t n, double delta, double lens_omega) {
  const double nd = static_cast<double>(n);
  const double w1 = lens_omega - 1.0;
  return static_cast<std::size_t>(
             std::ceil(std::log2(nd / (w1 * delta) + 4.0 * nd / w1))) +
         4;
}

OracleResult oracle(const ProblemInstance& inst, const DualPoint& s,
                    double delta, std::span<const double> lambda_q,
                    double lens_omega) {
  if (!(lens_omega > 1.0 && lens_omega <= 2.0)) {
    throw Error(ErrorCode::BadParam, "lens omega must lie in (1, 2]");
  }
  if (!(delta > 0.0)) throw Error(ErrorCode::BadParam, "delta must be positive");
  const std::size_t n = inst.cols();
  const auto q = inst.matrix().multiply_transpose(lambda_q);

  OracleResult r;
  r.o.resize(n);
  std::vector<double> mix(n);
  const auto core = oracle_core(s.h, s.p, q, delta, lens_omega, r.o, mix,
                                &r.identity_residuals);
  r.branch = core.branch;
  r.mu = core.mu;
  r.bisect_iters = core.iters;
  switch (core.branch) {
    case OracleBranch::Query:
      r.lambda_o.assign(lambda_q.begin(), lambda_q.end());
      break;
    case OracleBranch::Current:
      r.lambda_o = s.lambda;
      break;
    case OracleBranch::Bisection:
      r.lambda_o.resize(s.lambda.size());
      for (std::size_t i = 0; i < s.lambda.size(); ++i) {
        r.lambda_o[i] = (1.0 - core.mu) * s.lambda[i] + core.mu * lambda_q[i];
      }
      break;
  }
  return r;
}

std::vector<double> mw_step(std::span<const double> Lambda,
                            std::span<const double> loss, double rate) {
  std::vector<double> out(Lambda.size());
  for (std::size_t i = 0; i < Lambda.size(); ++i) {
    const double factor = 1.0 - rate * loss[i];
    if (!(factor > 0.0)) {
      throw Error(ErrorCode::NonPositiveWeight,
                  "multiplicative-weights factor " + std::to_string(factor) +
                      " is not positive; the loss exceeds the width bound");
    }
    out[i] = Lambda[i] * factor;
  }
  return out;
}

DualResult solve_dual(const ProblemInstance& inst, double eps,
                      const DualOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const SparseMatrix& a = inst.matrix();
  const std::size_t n = inst.cols(), m = inst.rows();
  const double nd = static_cast<double>(n);
  if (!has_box_rows(inst)) {
    throw Error(ErrorCode::BadParam,
                "the dual solver needs the unit rows e_1..e_n first; "
                "augment the instance");
  }
  if (!(eps > 0.0 && eps <= nd * (nd - 1.0))) {
    throw Error(ErrorCode::EpsOutOfRange,
                "eps must lie in (0, n(n-1)] = (0, " +
                    std::to_string(nd * (nd - 1.0)) + "]");
  }
  if (!(opts.rate_divisor > 0.0)) {
    throw Error(ErrorCode::BadParam, "rate divisor must be positive");
  }
  const double omega = opts.lens_omega;
  const double target = eps / nd;
  const int T = std::max(0, static_cast<int>(std::ceil(std::log2(2.0 / target))));

  DualResult res;
  std::vector<double> lambda_bar(m, 0.0);
  for (std::size_t j = 0; j < n; ++j) lambda_bar[j] = 1.0 / nd;
  double eps_prev = nd - 1.0;

  std::vector<double> h_q(n), o(n), mix(n), o_sum(n), h_run(n);
  std::vector<double> lam_sum(m);
  std::uint64_t calls = 0;
  bool hit = false;

  for (int t = 0; t <= T; ++t) {
    const DualPoint s = DualPoint::from_lambda(inst, lambda_bar);
    const auto I = filter_constraints(inst, s.p, eps_prev, omega);
    const double eps_t = t == 0 ? std::max(2.0, target) : eps_prev / 2.0;
    WidthParams wp = width_params(eps_prev, n, s.h, omega);
    if (t == 0 && target > 2.0) wp.tau_w = target;

    const double logI = std::log(static_cast<double>(I.size()));
    const double k_raw = 32.0 * wp.tau_w * wp.sigma * logI / (eps_t * eps_t);
    const std::uint64_t K =
        std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(k_raw)));
    const double rate = eps_t / (opts.rate_divisor * wp.tau_w * wp.sigma);

    std::vector<double> Lambda(I.size(), 1.0);
    std::vector<double> loss(I.size());
    std::fill(lam_sum.begin(), lam_sum.end(), 0.0);
    std::fill(o_sum.begin(), o_sum.end(), 0.0);
    double coef_s = 0.0;  // accumulated weight on s.lambda

    std::uint64_t k = 0;
    for (; k < K; ++k) {
      double total = 0.0;
      for (double v : Lambda) total += v;
      std::fill(h_q.begin(), h_q.end(), 0.0);
      for (std::size_t r = 0; r < I.size(); ++r) {
        const double wgt = Lambda[r] / total;
        for (const auto& e : a.row(I[r])) h_q[e.index] += wgt * e.value;
      }

      const auto core =
          oracle_core(s.h, s.p, h_q, eps_prev, omega, o, mix, nullptr);
      ++calls;

      // accumulate lambda_o = (1-mu) lambda_s + mu lambda_q
      coef_s += 1.0 - core.mu;
      if (core.mu > 0.0) {
        for (std::size_t r = 0; r < I.size(); ++r) {
          lam_sum[I[r]] += core.mu * Lambda[r] / total;
        }
      }
      for (std::size_t j = 0; j < n; ++j) o_sum[j] += o[j];

      double top = 0.0;
      for (std::size_t r = 0; r < I.size(); ++r) {
        const double l = 1.0 - a.row_dot(I[r], o);
        loss[r] = l;
        res.max_width_excess = std::max(
            {res.max_width_excess, -wp.sigma - l, l - wp.tau_w});
      }
      for (std::size_t r = 0; r < I.size(); ++r) {
        const double factor = 1.0 - rate * loss[r];
        if (!(factor > 0.0)) {
          throw Error(ErrorCode::NonPositiveWeight,
                      "multiplicative-weights factor is not positive");
        }
        Lambda[r] *= factor;
        top = std::max(top, Lambda[r]);
      }
      // keep weights in range; only their ratios matter
      for (double& v : Lambda) {
        v = std::max(v / top, std::numeric_limits<double>::min());
      }

      if (opts.first_hit_target && !hit) {
        const double kk = static_cast<double>(k + 1);
        std::fill(h_run.begin(), h_run.end(), 0.0);
        for (std::size_t i = 0; i < m; ++i) {
          const double lam = (coef_s * s.lambda[i] + lam_sum[i]) / kk;
          if (lam == 0.0) continue;
          for (const auto& e : a.row(i)) h_run[e.index] += lam * e.value;
        }
        if (proxy_value(inst, centroid(h_run)) <= *opts.first_hit_target) {
          hit = true;
          res.first_hit = calls;
          if (opts.stop_at_first_hit) {
            ++k;
            break;
          }
        }
      }
    }

    const double kk = static_cast<double>(k);
    for (std::size_t i = 0; i < m; ++i) {
      lambda_bar[i] = (coef_s * s.lambda[i] + lam_sum[i]) / kk;
    }
    for (double& v : o_sum) v /= kk;
    const double ghat = proxy_value(inst, centroid(a.multiply_transpose(lambda_bar)));
    res.average_point_proxy.push_back(proxy_value(inst, o_sum));
    res.phases.push_back({static_cast<std::size_t>(t), eps_t, I.size(), K,
                          wp.sigma, wp.tau_w, ghat});

    if (hit && opts.stop_at_first_hit) break;
    if (ghat > 1.0 + eps_t + 1e-9) {
      throw Error(ErrorCode::ProxyGateFailed,
                  "phase " + std::to_string(t) + " ended with proxy value " +
                      std::to_string(ghat) + " > 1 + " + std::to_string(eps_t));
    }
    eps_prev = eps_t;
  }

  res.lambda_bar = std::move(lambda_bar);
  res.oracle_calls = calls;
  res.proxy = res.phases.back().ghat_after;
  res.objective = dual_objective(inst, res.lambda_bar);

  SolveReport& r = res.report;
  r.solver = "dual";
  r.eps = eps;
  r.n = n;
  r.m = m;
  r.nnz = inst.nnz();
  r.iterations = calls;
  r.objective_normalized = res.objective;
  r.objective = res.objective + inst.objective_offset();
  r.proxy_value = res.proxy;
  r.residual = res.proxy - 1.0;
  r.phases = res.phases;
  r.solution = res.lambda_bar;
  r.wall_time_s = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  return res;
}

}  // namespace fairpack

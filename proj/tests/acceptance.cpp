// End-to-end acceptance run: one PASS/FAIL line per criterion. Every
// tolerance below is fixed here; exit status is non-zero if any line fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "fairpack/distsim.hpp"
#include "fairpack/dual.hpp"
#include "fairpack/errors.hpp"
#include "fairpack/primal.hpp"
#include "fairpack/refsolver.hpp"
#include "fairpack/ylstage.hpp"
#include "support.hpp"

using namespace fairpack;
using namespace fairpack::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool ok, double secs, double budget, const std::string& detail) {
  const bool in_time = secs <= budget;
  const bool pass = ok && in_time;
  failures += !pass;
  std::printf("criterion %2d: %s  (%.2f s of %.0f s) %s%s\n", id, pass ? "PASS" : "FAIL", secs,
              budget, detail.c_str(), in_time ? "" : " [over time budget]");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double sum_log(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += std::log(v);
  return s;
}

// Shared instance set of the primal/dual contract checks.
struct Case {
  ProblemInstance inst;
  double f_star = 0.0;
  std::vector<std::vector<double>> xbars;  // one per primal eps
  std::vector<double> lambda_bar;  // over the augmented rows
  ProblemInstance augmented;
};

std::vector<Case> make_cases() {
  std::vector<Case> cases;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto s = shape_for(seed + 500, 10, 30);
    const double rho = std::pow(10.0, 1 + seed % 4);
    auto inst = generate_random(s.n, s.m, rho, seed);
    auto aug = augment_with_box_rows(inst).instance;
    cases.push_back({inst, 0.0, {}, {}, aug});
  }
  return cases;
}

constexpr double kPrimalEps[] = {0.1, 0.5};

// 1: primal feasibility and the 5 eps optimality gap.
void criterion1(std::vector<Case>& cases) {
  const auto t0 = Clock::now();
  bool ok = true;
  double worst_res = -INFINITY, worst_gap_excess = -INFINITY, worst_ref = 0.0;
  for (auto& c : cases) {
    auto ref = reference_solve(c.inst);
    worst_ref = std::max(worst_ref, std::abs(ref.f_star - ref.g_star));
    ok &= std::abs(ref.f_star - ref.g_star) <= 1e-6;
    c.f_star = ref.f_star;
    for (double eps : kPrimalEps) {
      auto r = solve_primal(c.inst, eps);
      c.xbars.push_back(r.xbar);
      const double res = max_constraint_violation(c.inst, r.xbar);
      const double gap = ref.f_star - sum_log(r.xbar);
      worst_res = std::max(worst_res, res);
      worst_gap_excess = std::max(worst_gap_excess, gap - 5 * eps);
      ok &= res <= 1e-12;
      ok &= gap <= 5 * eps + 1e-9;
    }
  }
  report(1, ok, seconds_since(t0), 60,
         fmt("max residual %.3g, max (gap - 5eps) %.3g, max |f*-g*| %.3g", worst_res,
             worst_gap_excess, worst_ref));
}

// 2: the iteration count does not depend on the width.
void criterion2() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::vector<std::uint64_t> Ts;
  double worst = -INFINITY;
  for (double rho : {10.0, 1e3, 1e6}) {
    auto inst = generate_random(6, 12, rho, 2024);
    auto r = solve_primal(inst, 0.2);
    auto ref = reference_solve(inst);
    Ts.push_back(r.report.iterations);
    const double gap = ref.f_star - sum_log(r.xbar);
    worst = std::max(worst, gap);
    ok &= gap <= 5 * 0.2 + 1e-9;
    ok &= max_constraint_violation(inst, r.xbar) <= 1e-12;
    ok &= r.report.iterations == r.params.T;
  }
  ok &= Ts[0] == Ts[1] && Ts[1] == Ts[2];
  report(2, ok, seconds_since(t0), 30,
         fmt("T = %.0f / %.0f / %.0f", double(Ts[0]), double(Ts[1]), double(Ts[2])) +
             fmt(", worst gap %.3g (bound 1.0)", worst));
}

// 3: dual contract at eps = 0.5.
void criterion3(std::vector<Case>& cases) {
  const auto t0 = Clock::now();
  const double eps = 0.5;
  bool ok = true;
  double worst_proxy = -INFINITY, worst_gap = -INFINITY;
  for (auto& c : cases) {
    auto r = solve_dual(c.augmented, eps);
    c.lambda_bar = r.lambda_bar;
    const double n = static_cast<double>(c.inst.cols());
    const double proxy = proxy_value(
        c.augmented, centroid(c.augmented.matrix().multiply_transpose(r.lambda_bar)));
    const double gap = dual_objective(c.augmented, r.lambda_bar) - c.f_star;
    worst_proxy = std::max(worst_proxy, proxy - (1 + eps / n));
    worst_gap = std::max(worst_gap, gap);
    ok &= proxy <= 1 + eps / n + 1e-9;
    ok &= gap <= eps + 1e-9;
  }
  report(3, ok, seconds_since(t0), 120,
         fmt("max (ghat - 1 - eps/n) %.3g, max g - g* %.3g", worst_proxy, worst_gap));
}

// 4: weak duality and the combined gap. The pair's accuracy is the coarser
// of the two runs, 0.5.
void criterion4(const std::vector<Case>& cases) {
  const auto t0 = Clock::now();
  bool ok = true;
  double lo = INFINITY, hi = -INFINITY;
  int pairs = 0;
  for (const auto& c : cases) {
    for (const auto& xbar : c.xbars) {
      auto rep = duality_report(c.augmented, xbar, c.lambda_bar);
      lo = std::min(lo, rep.gap);
      hi = std::max(hi, rep.gap);
      ok &= rep.gap >= 0.0 && rep.gap <= 6 * 0.5 + 1e-8;
      ++pairs;
    }
  }
  report(4, ok, seconds_since(t0), 10,
         fmt("%.0f pairs, gap range [%.3g, %.3g], bound 3", pairs, lo, hi));
}

// Moves a random lambda toward lambda* until its proxy value is at most
// 1 + u delta.
std::vector<double> point_with_proxy(const ProblemInstance& inst,
                                     const std::vector<double>& lstar,
                                     std::mt19937_64& rng, double delta) {
  auto l0 = random_simplex(rng, inst.rows());
  const double target = 1.0 + delta * uniform_vec(rng, 1, 0.05, 1.0)[0];
  auto mix = [&](double th) {
    std::vector<double> l(l0.size());
    for (std::size_t i = 0; i < l.size(); ++i) l[i] = (1 - th) * l0[i] + th * lstar[i];
    return l;
  };
  auto proxy_at = [&](double th) {
    return proxy_value(inst, centroid(inst.matrix().multiply_transpose(mix(th))));
  };
  if (proxy_at(0.0) <= target) return l0;
  double a = 0.0, b = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (a + b);
    (proxy_at(mid) <= target ? b : a) = mid;
  }
  return mix(b);
}

// 5: oracle guarantees on randomized calls.
void criterion5() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(55);
  const double tol = 1e-10;
  int calls = 0, bad = 0, bisections = 0;
  double worst_cov = -INFINITY, worst_lens = -INFINITY, worst_width = -INFINITY,
         worst_red = -INFINITY, worst_id = 0.0;
  for (int inst_id = 0; inst_id < 50; ++inst_id) {
    auto s = shape_for(inst_id + 900, 7, 14);
    auto inst = augment_with_box_rows(generate_random(s.n, s.m, 1e3, inst_id)).instance;
    const auto lstar = reference_solve(inst).lambda_star;
    const std::size_t n = inst.cols();
    for (int rep = 0; rep < 20; ++rep, ++calls) {
      const double delta = std::array<double, 3>{0.01, 0.5, 3.0}[rep % 3];
      auto sp = DualPoint::from_lambda(inst, point_with_proxy(inst, lstar, rng, delta));
      const auto I = filter_constraints(inst, sp.p, delta);
      std::vector<double> lq(inst.rows(), 0.0);
      switch (rep % 4) {
        case 0:  // one active row
          lq[I[rng() % I.size()]] = 1.0;
          break;
        case 1: {  // spread over the active rows
          auto w = random_simplex(rng, I.size());
          for (std::size_t r = 0; r < I.size(); ++r) lq[I[r]] = w[r];
          break;
        }
        case 2: {  // two active rows
          const double t = uniform_vec(rng, 1, 0, 1)[0];
          lq[I[rng() % I.size()]] += t;
          lq[I[rng() % I.size()]] += 1 - t;
          break;
        }
        default:
          lq = random_simplex(rng, inst.rows());
      }
      auto r = oracle(inst, sp, delta, lq);
      bisections += r.branch == OracleBranch::Bisection;
      const auto hq = inst.matrix().multiply_transpose(lq);
      const auto ho = inst.matrix().multiply_transpose(r.lambda_o);
      double cov = 0.0, lens1 = 0.0, lens2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        cov += hq[j] * r.o[j];
        lens1 += ho[j] * sp.p[j];
        lens2 += sp.h[j] * r.o[j];
      }
      const double lens_excess =
          std::max(lens1 - (1 + delta), lens2 - (1 + 2 * delta) / (1 + delta));
      const auto wp = width_params(delta, n, sp.h);
      double width_excess = -INFINITY, red_excess = -INFINITY;
      std::vector<bool> active(inst.rows(), false);
      for (auto i : I) active[i] = true;
      for (std::size_t i = 0; i < inst.rows(); ++i) {
        double dot = 0.0;
        for (const auto& e : inst.matrix().row(i)) dot += e.value * r.o[e.index];
        if (active[i]) {
          const double loss = 1.0 - dot;
          width_excess = std::max({width_excess, -wp.sigma - loss, loss - wp.tau_w});
        } else {
          red_excess = std::max(red_excess, dot - 1.0);
        }
      }
      double id = 0.0;
      for (double v : r.identity_residuals) id = std::max(id, v);
      const bool ok = cov <= 1 + tol && lens_excess <= tol && width_excess <= tol &&
                      red_excess <= tol && r.bisect_iters <= bisection_cap(n, delta) &&
                      id <= 1e-12;
      bad += !ok;
      worst_cov = std::max(worst_cov, cov - 1);
      worst_lens = std::max(worst_lens, lens_excess);
      worst_width = std::max(worst_width, width_excess);
      worst_red = std::max(worst_red, red_excess);
      worst_id = std::max(worst_id, id);
    }
  }
  report(5, bad == 0 && calls == 1000, seconds_since(t0), 10,
         fmt("%.0f calls, %.0f bisections, %.0f violations", calls, bisections, bad) +
             fmt("; worst coverage %.2g, lens %.2g, width %.2g", worst_cov, worst_lens,
                 worst_width) +
             fmt(", redundant %.2g, identity %.2g", worst_red, worst_id));
}

// 6: regret of the multiplicative weights update.
void criterion6() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(66);
  const std::size_t mt = 4;
  const double delta = 0.4;
  int sequences = 0, bad = 0;
  double worst = -INFINITY;
  for (auto [sigma, tau] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}}) {
    const double wplus = std::max(sigma, tau), wminus = std::min(sigma, tau);
    const double eta = delta / (4 * wminus);
    const double sign = tau >= sigma ? 1.0 : -1.0;
    const auto K = static_cast<std::size_t>(
        std::ceil(8 * sigma * tau * std::log(double(mt)) / (delta * delta)));
    for (int seq = 0; seq < 50; ++seq, ++sequences) {
      std::vector<double> Lambda(mt, 1.0), cum(mt, 0.0);
      double lhs = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        std::vector<double> loss(mt);
        if (seq % 3 == 0) {
          loss = uniform_vec(rng, mt, -sigma, tau);
        } else if (seq % 3 == 1) {  // extreme losses only
          for (auto& v : loss) v = rng() % 2 ? tau : -sigma;
        } else {  // hit the heaviest expert
          auto top = std::max_element(Lambda.begin(), Lambda.end()) - Lambda.begin();
          for (std::size_t i = 0; i < mt; ++i) loss[i] = i == std::size_t(top) ? tau : -sigma / 3;
        }
        double total = 0.0;
        for (double v : Lambda) total += v;
        for (std::size_t i = 0; i < mt; ++i) {
          lhs += loss[i] * Lambda[i] / total;
          cum[i] += loss[i];
        }
        Lambda = mw_step(Lambda, loss, eta / wplus);
      }
      for (std::size_t i = 0; i < mt; ++i) {
        const double slack = delta + (1 + sign * eta) / K * cum[i] - lhs / K;
        worst = std::max(worst, -slack);
        bad += slack < -1e-12;
      }
    }
  }
  report(6, bad == 0, seconds_since(t0), 5,
         fmt("%.0f sequences, %.0f violations, worst excess %.3g", sequences, bad, worst));
}

// 7: descent inequality along a run and gradient against central differences.
void criterion7() {
  const auto t0 = Clock::now();
  auto inst = generate_random(5, 6, 50.0, 7);
  const auto P = derive_params(inst, 0.5);
  int checked = 0, descent_bad = 0, grad_bad = 0, skipped = 0;
  double worst_descent = -INFINITY, worst_grad = 0.0;
  PrimalOptions opts;
  opts.observer = [&](const PrimalState& st) {
    if (st.k % 10 != 0) return;
    auto fx = regularized_objective(inst, st.x, P.beta);
    auto fy = regularized_objective(inst, st.y, P.beta);
    if (fx.saturated || fy.saturated) {
      ++skipped;
      return;
    }
    auto g = regularized_gradient(inst, st.x, P.beta);
    double inner = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) inner += g[j] * (st.x[j] - st.y[j]);
    const double slack = fx.value - fy.value - 0.5 * inner;
    worst_descent = std::max(worst_descent, -slack);
    descent_bad += slack < -1e-9;

    const double h = 1e-6;
    for (std::size_t j = 0; j < g.size(); ++j) {
      auto xp = st.x, xm = st.x;
      xp[j] += h;
      xm[j] -= h;
      const double fd = (regularized_objective(inst, xp, P.beta).value -
                         regularized_objective(inst, xm, P.beta).value) /
                        (2 * h);
      const double rel = std::abs(fd - g[j]) / std::max(1.0, std::abs(g[j]));
      worst_grad = std::max(worst_grad, rel);
      grad_bad += rel > 1e-4;
    }
    ++checked;
  };
  solve_primal(inst, 0.5, opts);
  report(7, checked > 0 && descent_bad == 0 && grad_bad == 0, seconds_since(t0), 60,
         fmt("%.0f iterates, worst descent violation %.3g, worst gradient error %.3g", checked,
             worst_descent, worst_grad) +
             fmt(", %.0f saturated skipped", skipped));
}

// 8: simplex-shrinking stage and the head-to-head count against the dual.
void criterion8() {
  const auto t0 = Clock::now();
  bool ok = true;
  double worst_ratio = -INFINITY;
  std::uint64_t yl_total = 0, yl_base_total = 0, dual_total = 0;
  int compared = 0, unreached = 0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const std::size_t n = 4 + i % 5;
    const std::size_t m = 2 * n + i % 3;
    auto inst = generate_random(n, m, 100.0, 800 + i);
    const auto cap = yl_default_cap(n);
    auto y = yl_stage(inst);
    const double bound = std::exp(-1.0 / (2.0 * (n + 1.0) * (n + 1.0)));
    for (const auto& st : y.steps) {
      worst_ratio = std::max(worst_ratio, std::exp(st.log_ratio) - bound);
      ok &= std::exp(st.log_ratio) <= bound + 1e-12;
    }
    ok &= y.state.k <= cap;
    ok &= y.proxy <= 1.0 + 1.0 / n;
    if (n >= 6) {
      // head to head on the same (box-augmented) instance the dual needs
      const auto aug = augment_with_box_rows(inst).instance;
      auto ya = yl_stage(aug);
      ok &= ya.proxy <= 1.0 + 1.0 / n;
      DualOptions opts;
      opts.first_hit_target = 1.0 + 1.0 / n;
      opts.stop_at_first_hit = true;
      auto d = solve_dual(aug, 1.0, opts);
      if (d.first_hit) {
        dual_total += *d.first_hit;
      } else {
        dual_total += d.oracle_calls;
        ++unreached;
      }
      yl_total += ya.state.k;
      yl_base_total += y.state.k;
      ++compared;
    }
  }
  const bool trend = dual_total <= yl_total;
  report(8, ok && trend, seconds_since(t0), 60,
         fmt("worst ratio excess %.3g; n>=6: dual %.0f vs YL %.0f iterations", worst_ratio,
             double(dual_total), double(yl_total)) +
             fmt(" (YL without box rows %.0f) over %.0f instances, %.0f without a hit",
                 double(yl_base_total), compared, unreached));
}

// 9: message-passing run equals the sequential one bit for bit.
void criterion9() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::uint64_t foreign = 0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    auto s = shape_for(i + 300, 6, 10);
    auto inst = generate_random(s.n, s.m, 1e3, i);
    auto seq = solve_primal(inst, 0.5);
    AccessMonitor mon;
    DistributedOptions opts;
    opts.threads = 1 + i % 3;
    opts.monitor = &mon;
    auto dist = run_distributed(inst, 0.5, seq.params.T, opts);
    ok &= seq.xbar.size() == dist.xbar.size() &&
          std::memcmp(seq.xbar.data(), dist.xbar.data(), seq.xbar.size() * sizeof(double)) == 0;
    ok &= std::memcmp(seq.y_final.data(), dist.y_final.data(),
                      seq.y_final.size() * sizeof(double)) == 0;
    ok &= mon.own_reads() > 0;
    foreign += mon.foreign_reads();
  }
  ok &= foreign == 0;
  report(9, ok, seconds_since(t0), 60, fmt("%.0f foreign reads", double(foreign)));
}

// 10: involution, convexity, lower bound on x*, normalization idempotence.
void criterion10() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1010);
  int bad_inv = 0, bad_cvx = 0, bad_lb = 0, bad_norm = 0;
  for (int rep = 0; rep < 60; ++rep) {
    auto h = uniform_vec(rng, 1 + rng() % 12, 1e-3, 1e3);
    auto back = centroid(centroid(h));
    for (std::size_t j = 0; j < h.size(); ++j) bad_inv += std::abs(back[j] - h[j]) > 1e-14 * h[j];

    auto inst = augment_with_box_rows(generate_random(2 + rep % 8, 10, 1e4, rep)).instance;
    const std::size_t k = 2 + rng() % 5;
    auto zeta = random_simplex(rng, k);
    std::vector<double> hmix(inst.cols(), 0.0), pmix(inst.cols(), 0.0);
    for (std::size_t t = 0; t < k; ++t) {
      auto d = DualPoint::from_lambda(inst, random_simplex(rng, inst.rows()));
      for (std::size_t j = 0; j < inst.cols(); ++j) {
        hmix[j] += zeta[t] * d.h[j];
        pmix[j] += zeta[t] * d.p[j];
      }
    }
    // 1/x is convex, so the centroid of mixed constraints sits below the
    // mixed centroids
    auto lhs = centroid(hmix);
    for (std::size_t j = 0; j < lhs.size(); ++j) bad_cvx += lhs[j] > pmix[j] + 1e-12;

    auto s = shape_for(rep + 1200, 12, 40);
    auto base = generate_random(s.n, s.m, 1e3, rep + 1200);
    auto ref = reference_solve(base);
    for (double x : ref.x_star) bad_lb += x < 1.0 / s.n - 1e-9;

    auto raw = base.matrix().triplets();
    for (auto& t : raw) t.value *= uniform_vec(rng, 1, 0.1, 10.0)[0];
    auto once = normalize_columns(SparseMatrix::from_triplets(s.m, s.n, raw));
    bad_norm += !(normalize_columns(once) == once);
  }
  report(10, bad_inv + bad_cvx + bad_lb + bad_norm == 0, seconds_since(t0), 60,
         fmt("60 cases each; failures: involution %.0f, convexity %.0f, ", bad_inv, bad_cvx) +
             fmt("lower bound %.0f, idempotence %.0f", bad_lb, bad_norm));
}

}  // namespace

int main() {
  try {
    auto cases = make_cases();
    criterion1(cases);
    criterion2();
    criterion3(cases);
    criterion4(cases);
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

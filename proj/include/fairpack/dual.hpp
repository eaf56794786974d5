#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fairpack/instance.hpp"
#include "fairpack/report.hpp"

namespace fairpack {

// lambda in the simplex together with its constraint h = A^T lambda and the
// centroid p = c(h) of the simplex that constraint cuts from the orthant.
struct DualPoint {
  std::vector<double> lambda;
  std::vector<double> h;
  std::vector<double> p;

  // Throws Error(NonPositiveConstraint) if some h_j <= 0.
  static DualPoint from_lambda(const ProblemInstance& inst,
                               std::vector<double> lambda);
};

// (1/(n h_1), ..., 1/(n h_n)). Self-inverse. Throws NonPositiveConstraint.
std::vector<double> centroid(std::span<const double> h);

// max_i <A_i, p>
double proxy_value(const ProblemInstance& inst, std::span<const double> p);

// g(lambda) = -sum_j log (A^T lambda)_j - n log n.
// Throws Error(DegenerateDual) if A^T lambda has a non-positive entry.
double dual_objective(const ProblemInstance& inst,
                      std::span<const double> lambda);

struct WidthParams {
  double sigma = 0.0;
  double tau_w = 0.0;
};

// Loss range [-sigma, tau_w] the oracle guarantees on non-redundant rows,
// given a current solution whose proxy value is at most 1 + delta.
WidthParams width_params(double delta, std::size_t n,
                         std::span<const double> h_s, double lens_omega = 2.0);

// Rows with <A_i, p> below this value are redundant.
double filter_threshold(double eps_prev, std::size_t n, double lens_omega = 2.0);

// Indices (ascending) of the rows that survive filtering.
std::vector<std::size_t> filter_constraints(const ProblemInstance& inst,
                                            std::span<const double> p_current,
                                            double eps_prev,
                                            double lens_omega = 2.0);

enum class OracleBranch {
  Query,      // c(q) already lies in the lens
  Current,    // the current solution's centroid satisfies the query
  Bisection,  // mix of the two constraints found by bisection
};

struct OracleResult {
  std::vector<double> lambda_o;
  std::vector<double> o;
  OracleBranch branch = OracleBranch::Query;
  std::size_t bisect_iters = 0;
  double mu = 0.0;
  // |(1-mu) pi_s(mu) + mu pi_q(mu) - 1| at every bisection probe.
  std::vector<double> identity_residuals;
};

// Bisection budget for the oracle's third branch.
std::size_t bisection_cap(std::size_t n, double delta, double lens_omega = 2.0);

// Returns a point o = c(A^T lambda_o) with <q, o> <= 1 that lies in the lens
// around the current solution s. Requires proxy_value(s.p) <= 1 + delta.
// Throws Error(BisectionStall) if bisection exceeds bisection_cap.
OracleResult oracle(const ProblemInstance& inst, const DualPoint& s,
                    double delta, std::span<const double> lambda_q,
                    double lens_omega = 2.0);

// Lambda'_i = Lambda_i (1 - rate loss_i). Throws NonPositiveWeight if a new
// weight is not positive.
std::vector<double> mw_step(std::span<const double> Lambda,
                            std::span<const double> loss, double rate);

struct DualOptions {
  // Step size is eps_t / (rate_divisor * tau_w * sigma).
  double rate_divisor = 4.0;
  double lens_omega = 2.0;
  // Record the first oracle call after which the running average of the
  // current phase reaches proxy value <= first_hit_target.
  std::optional<double> first_hit_target;
  // Stop as soon as first_hit_target is reached.
  bool stop_at_first_hit = false;
};

struct DualResult {
  std::vector<double> lambda_bar;
  double proxy = 0.0;      // proxy_value at c(A^T lambda_bar)
  double objective = 0.0;  // g(lambda_bar), normalized instance
  std::uint64_t oracle_calls = 0;
  std::vector<PhaseRecord> phases;
  // Per phase: proxy value of the plain average of the oracle points.
  std::vector<double> average_point_proxy;
  // Worst amount by which a loss on a non-redundant row left [-sigma, tau_w].
  double max_width_excess = 0.0;
  std::optional<std::uint64_t> first_hit;
  SolveReport report;
};

// Requires the first n rows of inst to be the unit rows (see
// augment_with_box_rows); throws BadParam otherwise. eps must lie in
// (0, n(n-1)].
DualResult solve_dual(const ProblemInstance& inst, double eps,
                      const DualOptions& opts = {});

}  // namespace fairpack

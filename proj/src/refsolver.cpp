#include "fairpack/refsolver.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "fairpack/dual.hpp"
#include "fairpack/errors.hpp"

namespace fairpack {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

}  // namespace

ReferenceSolution reference_solve(const ProblemInstance& inst) {
  const std::size_t n = inst.cols(), m = inst.rows();
  if (n > kReferenceMaxCols || m > kReferenceMaxRows) {
    throw Error(ErrorCode::ScaleTooLarge,
                "reference solver handles at most 12 columns and 40 rows");
  }
  const auto ni = static_cast<Eigen::Index>(n), mi = static_cast<Eigen::Index>(m);
  MatrixXd A = MatrixXd::Zero(mi, ni);
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& e : inst.matrix().row(i)) A(i, e.index) = e.value;
  }

  // Primal-dual Newton on  A^T y = 1/x,  y_i (1 - A x)_i = mu,  with mu
  // driven to zero. Keeping y as an unknown avoids recovering it from tiny
  // slacks, which loses most of its digits.
  VectorXd x = VectorXd::Constant(ni, 0.5 / static_cast<double>(n));
  VectorXd y = VectorXd::Ones(mi);
  VectorXd slack = VectorXd::Ones(mi) - A * x;

  ReferenceSolution sol;
  bool done = false;
  for (int it = 0; it < 200 && !done; ++it) {
    ++sol.newton_steps;
    const double gap = y.dot(slack) / static_cast<double>(m);
    const VectorXd r1 = A.transpose() * y - x.cwiseInverse();
    const double stat = (r1.cwiseProduct(x)).cwiseAbs().maxCoeff();
    if (gap < 1e-12 && stat < 1e-13) {
      done = true;
      break;
    }
    const double mu = 0.1 * gap;
    const VectorXd r2 = y.cwiseProduct(slack) - VectorXd::Constant(mi, mu);

    MatrixXd J = MatrixXd::Zero(ni + mi, ni + mi);
    J.topLeftCorner(ni, ni) = x.cwiseInverse().cwiseAbs2().asDiagonal();
    J.topRightCorner(ni, mi) = A.transpose();
    J.bottomLeftCorner(mi, ni) = -(y.asDiagonal() * A);
    J.bottomRightCorner(mi, mi) = slack.asDiagonal();
    VectorXd rhs(ni + mi);
    rhs << -r1, -r2;
    const VectorXd d = J.partialPivLu().solve(rhs);
    const VectorXd dx = d.head(ni), dy = d.tail(mi);
    const VectorXd ds = -(A * dx);

    double alpha = 1.0;
    auto limit = [&](const VectorXd& v, const VectorXd& dv) {
      for (Eigen::Index k = 0; k < v.size(); ++k) {
        if (dv(k) < 0.0) alpha = std::min(alpha, -0.995 * v(k) / dv(k));
      }
    };
    limit(x, dx);
    limit(y, dy);
    limit(slack, ds);
    x += alpha * dx;
    y += alpha * dy;
    slack = VectorXd::Ones(mi) - A * x;
    if ((slack.array() <= 0.0).any()) {
      throw Error(ErrorCode::NotConverged, "reference iterate left the feasible region");
    }
  }

  const VectorXd aty = A.transpose() * y;
  sol.x_star.assign(x.data(), x.data() + n);
  sol.lambda_star.resize(m);
  const double ysum = y.sum();
  for (std::size_t i = 0; i < m; ++i) sol.lambda_star[i] = y(i) / ysum;
  sol.f_star = log_utility(sol.x_star);
  sol.g_star = dual_objective(inst, sol.lambda_star);

  double kkt = 0.0;
  for (std::size_t j = 0; j < n; ++j) kkt = std::max(kkt, std::abs(x(j) * aty(j) - 1.0));
  for (std::size_t i = 0; i < m; ++i) kkt = std::max(kkt, y(i) * slack(i));
  sol.kkt_residual = kkt;

  if (!done || !(std::abs(sol.f_star - sol.g_star) <= 1e-6)) {
    throw Error(ErrorCode::NotConverged,
                "reference solve stopped with duality gap " +
                    std::to_string(sol.g_star - sol.f_star) + " and KKT residual " +
                    std::to_string(kkt));
  }
  return sol;
}

DualityReport duality_report(const ProblemInstance& inst,
                             std::span<const double> xbar,
                             std::span<const double> lambda_bar) {
  DualityReport r;
  for (double v : xbar) {
    if (!(v > 0.0)) {
      throw Error(ErrorCode::InfeasiblePrimal, "allocation has a non-positive entry");
    }
  }
  r.primal_residual = max_constraint_violation(inst, xbar);
  if (r.primal_residual > 1e-9) {
    throw Error(ErrorCode::InfeasiblePrimal,
                "allocation violates A x <= 1 by " +
                    std::to_string(r.primal_residual));
  }
  double total = 0.0;
  for (double l : lambda_bar) {
    if (l < 0.0) throw Error(ErrorCode::DegenerateDual, "negative dual weight");
    total += l;
  }
  r.simplex_residual = std::abs(total - 1.0);
  if (r.simplex_residual > 1e-9) {
    throw Error(ErrorCode::DegenerateDual, "dual weights do not sum to one");
  }
  r.f = log_utility(xbar);
  r.g = dual_objective(inst, lambda_bar);
  r.gap = r.g - r.f;
  return r;
}

}  // namespace fairpack

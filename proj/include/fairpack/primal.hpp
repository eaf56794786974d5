#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "fairpack/instance.hpp"
#include "fairpack/report.hpp"

namespace fairpack {

// Constants of the accelerated primal method. Depends on (n, m, eps) only;
// the matrix width never enters.
struct PrimalParams {
  std::size_t n = 0;
  std::size_t m = 0;
  double eps = 0.0;
  double beta = 0.0;
  double omega = 0.0;  // the box is B = [-omega, 0]^n
  double L = 0.0;
  double tau = 0.0;
  double eta0 = 0.0;
  std::uint64_t T = 0;
};

// Throws Error(EpsOutOfRange) unless 0 < eps <= n/2.
PrimalParams derive_params(std::size_t n, std::size_t m, double eps);
PrimalParams derive_params(const ProblemInstance& inst, double eps);

// Iterate k of the coupled loop, handed to an observer after each update.
struct PrimalState {
  std::uint64_t k = 0;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> z;
  std::vector<double> gbar;  // truncated gradient evaluated at x
  double eta_k = 0.0;
  double C_k = 0.0;  // 3 eta_k L
};

struct RegularizedValue {
  double value = 0.0;
  bool saturated = false;  // some power term exceeded exp(700)
};

// f_r(x) = -<1, x> + beta/(1+beta) sum_i (A exp x)_i^((1+beta)/beta)
RegularizedValue regularized_objective(const ProblemInstance& inst,
                                       std::span<const double> x, double beta);

// Untruncated gradient of f_r; entries may be +inf when the barrier explodes.
std::vector<double> regularized_gradient(const ProblemInstance& inst,
                                         std::span<const double> x,
                                         double beta);

// min{1, grad f_r(x)} componentwise, evaluated without overflow.
std::vector<double> truncated_gradient(const ProblemInstance& inst,
                                       std::span<const double> x, double beta);

// z_i = clip(z_prev_i - omega * eta * gbar_i, [-omega, 0])
std::vector<double> mirror_step(std::span<const double> z_prev,
                                std::span<const double> gbar, double eta_k,
                                double omega);

// exp(y) / (1 + eps/n)
std::vector<double> postprocess(std::span<const double> y_T, double eps,
                                std::size_t n);

struct PrimalOptions {
  // Called after every iteration; for tests and diagnostics.
  std::function<void(const PrimalState&)> observer;
  // When set, receives "k,f_r,max_residual" rows evaluated at y^(k).
  std::ostream* trace = nullptr;
};

struct PrimalResult {
  std::vector<double> xbar;  // normalized variables
  std::vector<double> y_final;
  PrimalParams params;
  SolveReport report;
};

PrimalResult solve_primal(const ProblemInstance& inst, double eps,
                          const PrimalOptions& opts = {});

}  // namespace fairpack

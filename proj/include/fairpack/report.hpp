#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace fairpack {

// One restart phase of the dual method.
struct PhaseRecord {
  std::size_t t = 0;
  double eps_t = 0.0;
  std::size_t active_rows = 0;  // |I_t|
  std::uint64_t K_t = 0;
  double sigma = 0.0;
  double tau_w = 0.0;
  double ghat_after = 0.0;
};

// Common result summary for every solver. Fields that do not apply to a
// solver stay empty and serialize as null, so the key set never changes.
struct SolveReport {
  std::string solver;
  std::optional<double> eps;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t nnz = 0;
  std::uint64_t iterations = 0;
  double wall_time_s = 0.0;

  // Objective of the caller's (unnormalized) problem: f(x) for primal
  // solvers, g(lambda) for dual ones.
  std::optional<double> objective;
  std::optional<double> objective_normalized;
  // Primal: max_i (A x)_i - 1. Dual and YL: proxy value minus one.
  std::optional<double> residual;
  std::optional<double> proxy_value;
  std::optional<double> duality_gap;
  std::optional<double> reference_objective;

  std::optional<double> final_fr;
  std::optional<double> max_box_excursion;
  std::optional<std::uint64_t> messages_per_round;
  std::optional<double> log_volume;
  std::optional<std::vector<PhaseRecord>> phases;
  // Primal: the allocation in the caller's units. Dual and YL: lambda.
  std::optional<std::vector<double>> solution;
};

nlohmann::json to_json(const PhaseRecord& p);
nlohmann::json to_json(const SolveReport& r);

// The key set every serialized SolveReport carries.
const std::vector<std::string>& report_keys();

}  // namespace fairpack

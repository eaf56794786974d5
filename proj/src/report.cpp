#include "fairpack/report.hpp"

namespace fairpack {
namespace {

template <class T>
nlohmann::json opt(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const PhaseRecord& p) {
  return {{"t", p.t},           {"eps_t", p.eps_t}, {"active_rows", p.active_rows},
          {"K_t", p.K_t},       {"sigma", p.sigma}, {"tau_w", p.tau_w},
          {"ghat_after", p.ghat_after}};
}

nlohmann::json to_json(const SolveReport& r) {
  nlohmann::json j;
  j["solver"] = r.solver;
  j["eps"] = opt(r.eps);
  j["n"] = r.n;
  j["m"] = r.m;
  j["nnz"] = r.nnz;
  j["iterations"] = r.iterations;
  j["wall_time_s"] = r.wall_time_s;
  j["objective"] = opt(r.objective);
  j["objective_normalized"] = opt(r.objective_normalized);
  j["residual"] = opt(r.residual);
  j["proxy_value"] = opt(r.proxy_value);
  j["duality_gap"] = opt(r.duality_gap);
  j["reference_objective"] = opt(r.reference_objective);
  j["final_fr"] = opt(r.final_fr);
  j["max_box_excursion"] = opt(r.max_box_excursion);
  j["messages_per_round"] = opt(r.messages_per_round);
  j["log_volume"] = opt(r.log_volume);
  if (r.phases) {
    auto arr = nlohmann::json::array();
    for (const auto& p : *r.phases) arr.push_back(to_json(p));
    j["phases"] = std::move(arr);
  } else {
    j["phases"] = nullptr;
  }
  j["solution"] = opt(r.solution);
  return j;
}

const std::vector<std::string>& report_keys() {
  static const std::vector<std::string> keys = {
      "solver",           "eps",
      "n",                "m",
      "nnz",              "iterations",
      "wall_time_s",      "objective",
      "objective_normalized", "residual",
      "proxy_value",      "duality_gap",
      "reference_objective", "final_fr",
      "max_box_excursion", "messages_per_round",
      "log_volume",       "phases",
      "solution"};
  return keys;
}

}  // namespace fairpack

// fairpack: generate, solve and certify proportional-fairness packing instances.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairpack/distsim.hpp"
#include "fairpack/dual.hpp"
#include "fairpack/errors.hpp"
#include "fairpack/instance.hpp"
#include "fairpack/mtx_io.hpp"
#include "fairpack/primal.hpp"
#include "fairpack/refsolver.hpp"
#include "fairpack/report.hpp"
#include "fairpack/ylstage.hpp"

namespace {

using namespace fairpack;

void emit(const SolveReport& r, const std::string& json_out) {
  const std::string text = to_json(r).dump(2);
  if (json_out.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(json_out);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + json_out);
  out << text << '\n';
}

std::unique_ptr<std::ofstream> open_trace(const std::string& path) {
  if (path.empty()) return nullptr;
  auto f = std::make_unique<std::ofstream>(path);
  if (!*f) throw Error(ErrorCode::IoError, "cannot write " + path);
  f->precision(17);
  return f;
}

struct Args {
  std::string path;
  std::string json_out;
  std::string trace;
  std::string message_trace;
  double eps = 0.5;
  bool distributed = false;
  std::size_t threads = 1;
  double rate_divisor = 4.0;
  std::uint64_t iter_cap = 0;

  std::size_t n = 0;
  std::size_t m = 0;
  double rho = 1.0;
  std::uint64_t seed = 0;
  double density = 0.5;
};

int cmd_gen(const Args& a) {
  const auto inst = generate_random(a.n, a.m, a.rho, a.seed, a.density);
  save_instance(a.path, inst);
  return 0;
}

int cmd_solve_primal(const Args& a) {
  const auto inst = load_instance(a.path);
  auto trace = open_trace(a.trace);
  SolveReport report;
  if (a.distributed) {
    DistributedOptions opts;
    opts.threads = a.threads;
    auto msgs = open_trace(a.message_trace);
    opts.message_trace = msgs.get();
    const auto T = derive_params(inst, a.eps).T;
    report = run_distributed(inst, a.eps, T, opts).report;
  } else {
    PrimalOptions opts;
    opts.trace = trace.get();
    report = solve_primal(inst, a.eps, opts).report;
  }
  emit(report, a.json_out);
  return 0;
}

int cmd_solve_dual(const Args& a) {
  const auto inst = augment_with_box_rows(load_instance(a.path)).instance;
  DualOptions opts;
  opts.rate_divisor = a.rate_divisor;
  emit(solve_dual(inst, a.eps, opts).report, a.json_out);
  return 0;
}

int cmd_yl(const Args& a) {
  const auto inst = load_instance(a.path);
  auto trace = open_trace(a.trace);
  YlOptions opts;
  opts.trace = trace.get();
  opts.keep_steps = false;
  if (a.iter_cap > 0) opts.iter_cap = a.iter_cap;
  emit(yl_stage(inst, opts).report, a.json_out);
  return 0;
}

int cmd_check(const Args& a) {
  const auto base = load_instance(a.path);
  const auto inst = augment_with_box_rows(base).instance;
  const auto primal = solve_primal(base, a.eps);
  DualOptions dopts;
  dopts.rate_divisor = a.rate_divisor;
  const auto dual = solve_dual(inst, a.eps, dopts);
  const auto cert = duality_report(inst, primal.xbar, dual.lambda_bar);

  SolveReport r;
  r.solver = "check";
  r.eps = a.eps;
  r.n = base.cols();
  r.m = base.rows();
  r.nnz = base.nnz();
  r.iterations = primal.report.iterations + dual.report.iterations;
  r.wall_time_s = primal.report.wall_time_s + dual.report.wall_time_s;
  r.objective_normalized = cert.f;
  r.objective = cert.f + base.objective_offset();
  r.residual = cert.primal_residual;
  r.proxy_value = dual.proxy;
  r.duality_gap = cert.gap;
  r.phases = dual.phases;
  r.solution = primal.report.solution;
  if (base.cols() <= kReferenceMaxCols && inst.rows() <= kReferenceMaxRows) {
    const auto ref = reference_solve(inst);
    r.reference_objective = ref.f_star + base.objective_offset();
  } else {
    std::cerr << "fairpack: instance too large for the reference solver; "
                 "reporting the duality-gap certificate only\n";
  }
  emit(r, a.json_out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proportional-fairness packing solvers"};
  app.require_subcommand(1);
  Args a;

  auto* gen = app.add_subcommand("gen", "Write a random normalized instance");
  gen->add_option("--n", a.n, "Columns (variables)")->required();
  gen->add_option("--m", a.m, "Rows (constraints)")->required();
  gen->add_option("--rho", a.rho, "Width bound, >= 1")->required();
  gen->add_option("--seed", a.seed, "Generator seed")->required();
  gen->add_option("--density", a.density, "Probability an entry is non-zero");
  gen->add_option("out_path", a.path, "Matrix Market output file")->required();

  auto add_common = [&](CLI::App* sub, bool with_eps) {
    sub->add_option("path", a.path, "Matrix Market instance")->required();
    if (with_eps) sub->add_option("--eps", a.eps, "Target accuracy");
    sub->add_option("--json-out", a.json_out, "Report file (stdout if unset)");
  };

  auto* primal = app.add_subcommand("solve-primal", "Accelerated primal method");
  add_common(primal, true);
  primal->add_option("--trace", a.trace, "CSV trace k,f_r,max_residual");
  primal->add_flag("--distributed", a.distributed,
                   "Run as a simulated round-based protocol");
  primal->add_option("--threads", a.threads, "Worker threads (distributed only)")
      ->envname("FAIRPACK_THREADS")
      ->check(CLI::PositiveNumber);
  primal->add_option("--message-trace", a.message_trace,
                     "CSV of delivered slack messages (distributed only)");

  auto* dual = app.add_subcommand("solve-dual", "Restarted multiplicative-weights dual method");
  add_common(dual, true);
  dual->add_option("--rate-divisor", a.rate_divisor,
                   "Step size is eps_t / (divisor * tau * sigma)");

  auto* yl = app.add_subcommand("yl", "One fixed-corner simplex-shrinking stage");
  add_common(yl, false);
  yl->add_option("--trace", a.trace, "CSV trace k,row,ghat,log_volume");
  yl->add_option("--iter-cap", a.iter_cap, "Iteration cap (default from n)");

  auto* check = app.add_subcommand("check", "Primal + dual + certificate (+ reference when small)");
  add_common(check, true);
  check->add_option("--rate-divisor", a.rate_divisor,
                    "Dual step size divisor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (*gen) return cmd_gen(a);
    if (*primal) return cmd_solve_primal(a);
    if (*dual) return cmd_solve_dual(a);
    if (*yl) return cmd_yl(a);
    if (*check) return cmd_check(a);
  } catch (const Error& e) {
    std::cerr << "fairpack: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "fairpack: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

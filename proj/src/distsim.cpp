#include "fairpack/distsim.hpp"

#include <algorithm>
#include <barrier>
#include <chrono>
#include <ostream>
#include <thread>

#include "fairpack/errors.hpp"
#include "primal_kernels.hpp"

namespace fairpack {

AgentView::AgentView(std::size_t agent_id, std::vector<Entry> column,
                     const AgentGlobals& globals, AccessMonitor* monitor)
    : id_(agent_id),
      column_(std::move(column)),
      globals_(globals),
      monitor_(monitor) {}

std::span<const Entry> AgentView::column() const {
  if (monitor_) monitor_->record_own();
  return column_;
}

double AgentView::coefficient(std::size_t i, std::size_t j) const {
  if (j != id_) {
    if (monitor_) monitor_->record_foreign();
    throw Error(ErrorCode::LocalityViolation,
                "agent " + std::to_string(id_) + " tried to read column " +
                    std::to_string(j));
  }
  if (monitor_) monitor_->record_own();
  for (const auto& e : column_) {
    if (e.index == i) return e.value;
  }
  return 0.0;
}

namespace {

// Wiring between agents and constraint aggregators. Agent j's k-th column
// entry owns slot offset[j] + k in both the contribution and inbox buffers.
struct Network {
  std::vector<std::size_t> offset;
  // For aggregator i: slots of its participants in ascending agent order.
  std::vector<std::size_t> agg_ptr;
  std::vector<std::size_t> agg_slot;
  std::vector<std::size_t> agg_agent;
  std::vector<double> contribution;
  std::vector<double> inbox;
};

Network wire(const SparseMatrix& a) {
  Network net;
  const std::size_t n = a.cols(), m = a.rows();
  net.offset.resize(n + 1, 0);
  for (std::size_t j = 0; j < n; ++j) {
    net.offset[j + 1] = net.offset[j] + a.col(j).size();
  }
  std::vector<std::size_t> count(m, 0);
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& e : a.col(j)) ++count[e.index];
  }
  net.agg_ptr.assign(m + 1, 0);
  for (std::size_t i = 0; i < m; ++i) net.agg_ptr[i + 1] = net.agg_ptr[i] + count[i];
  net.agg_slot.resize(a.nnz());
  net.agg_agent.resize(a.nnz());
  std::vector<std::size_t> fill(net.agg_ptr.begin(), net.agg_ptr.end() - 1);
  for (std::size_t j = 0; j < n; ++j) {  // ascending j keeps agent order
    auto col = a.col(j);
    for (std::size_t k = 0; k < col.size(); ++k) {
      const std::size_t pos = fill[col[k].index]++;
      net.agg_slot[pos] = net.offset[j] + k;
      net.agg_agent[pos] = j;
    }
  }
  net.contribution.assign(a.nnz(), 0.0);
  net.inbox.assign(a.nnz(), 0.0);
  return net;
}

}  // namespace

DistributedResult run_distributed(const ProblemInstance& inst, double eps,
                                  std::uint64_t rounds_cap,
                                  const DistributedOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const PrimalParams P = derive_params(inst, eps);
  if (rounds_cap < P.T) {
    throw Error(ErrorCode::RoundsCapExceeded,
                "the method needs " + std::to_string(P.T) +
                    " rounds but the cap is " + std::to_string(rounds_cap));
  }
  const SparseMatrix& a = inst.matrix();
  const std::size_t n = P.n, m = P.m;

  AccessMonitor local_monitor;
  AccessMonitor* monitor = opts.monitor ? opts.monitor : &local_monitor;
  const std::uint64_t foreign_before = monitor->foreign_reads();

  const AgentGlobals globals{m, n, eps, P.beta, P.omega, P.L, P.tau};
  std::vector<AgentView> agents;
  agents.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto col = a.col(j);
    agents.emplace_back(j, std::vector<Entry>(col.begin(), col.end()), globals,
                        monitor);
    agents.back().x = agents.back().y = agents.back().z = -P.omega;
    agents.back().eta = P.eta0;
  }

  Network net = wire(a);
  // agent-local scratch
  std::vector<double> exp_x(n);
  std::vector<double> logw(a.nnz()), w(a.nnz());
  std::vector<double> excursion(n, 0.0);

  auto agent_send = [&](std::size_t j) {
    AgentView& ag = agents[j];
    ag.eta = kernel::eta_next(ag.eta, P.tau);
    ag.x = kernel::clamp_box(kernel::couple(ag.z, ag.y, P.tau), P.omega,
                             excursion[j]);
    exp_x[j] = std::exp(ag.x);
    auto col = ag.column();
    const std::size_t off = net.offset[j];
    for (std::size_t k = 0; k < col.size(); ++k) {
      net.contribution[off + k] = col[k].value * exp_x[j];
    }
  };

  auto aggregate = [&](std::size_t i) {
    double acc = 0.0;
    for (std::size_t p = net.agg_ptr[i]; p < net.agg_ptr[i + 1]; ++p) {
      acc += net.contribution[net.agg_slot[p]];
    }
    const double slack = acc - 1.0;
    for (std::size_t p = net.agg_ptr[i]; p < net.agg_ptr[i + 1]; ++p) {
      net.inbox[net.agg_slot[p]] = slack;
    }
  };

  auto agent_update = [&](std::size_t j) {
    AgentView& ag = agents[j];
    auto col = ag.column();
    const std::size_t off = net.offset[j];
    for (std::size_t k = 0; k < col.size(); ++k) {
      logw[off + k] = kernel::row_log_weight(net.inbox[off + k], P.beta);
      w[off + k] = kernel::row_weight(logw[off + k]);
    }
    const double g = kernel::truncated_gradient_column(
        col, [&](std::size_t k) { return logw[off + k]; },
        [&](std::size_t k) { return w[off + k]; }, ag.x, exp_x[j]);
    const double z_new = kernel::mirror(ag.z, g, ag.eta, P.omega);
    ag.y = kernel::clamp_box(kernel::gradient_step(ag.x, z_new, ag.z, ag.eta, P.L),
                             P.omega, excursion[j]);
    ag.z = z_new;
  };

  auto dump_messages = [&](std::uint64_t round) {
    if (!opts.message_trace) return;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t p = net.agg_ptr[i]; p < net.agg_ptr[i + 1]; ++p) {
        *opts.message_trace << round << ',' << i << ',' << net.agg_agent[p]
                            << ',' << net.inbox[net.agg_slot[p]] << '\n';
      }
    }
  };

  if (opts.message_trace) *opts.message_trace << "round,constraint,agent,slack\n";

  const std::size_t workers =
      std::max<std::size_t>(1, std::min(opts.threads, std::max(n, m)));
  if (workers == 1) {
    for (std::uint64_t r = 1; r <= P.T; ++r) {
      for (std::size_t j = 0; j < n; ++j) agent_send(j);
      for (std::size_t i = 0; i < m; ++i) aggregate(i);
      dump_messages(r);
      for (std::size_t j = 0; j < n; ++j) agent_update(j);
    }
  } else {
    std::barrier sync(static_cast<std::ptrdiff_t>(workers));
    auto range = [&](std::size_t count, std::size_t t) {
      return std::pair{count * t / workers, count * (t + 1) / workers};
    };
    auto work = [&](std::size_t t) {
      const auto [j0, j1] = range(n, t);
      const auto [i0, i1] = range(m, t);
      for (std::uint64_t r = 1; r <= P.T; ++r) {
        for (std::size_t j = j0; j < j1; ++j) agent_send(j);
        sync.arrive_and_wait();
        for (std::size_t i = i0; i < i1; ++i) aggregate(i);
        sync.arrive_and_wait();
        if (t == 0) dump_messages(r);
        for (std::size_t j = j0; j < j1; ++j) agent_update(j);
        sync.arrive_and_wait();
      }
    };
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(work, t);
    work(0);
  }

  DistributedResult res;
  res.params = P;
  res.rounds = P.T;
  res.messages_per_round = a.nnz();
  res.total_messages = a.nnz() * P.T;
  res.foreign_reads = monitor->foreign_reads() - foreign_before;
  res.y_final.resize(n);
  for (std::size_t j = 0; j < n; ++j) res.y_final[j] = agents[j].y;
  res.xbar = postprocess(res.y_final, eps, n);

  SolveReport& r = res.report;
  r.solver = "primal-distributed";
  r.eps = eps;
  r.n = n;
  r.m = m;
  r.nnz = a.nnz();
  r.iterations = P.T;
  const double f = log_utility(res.xbar);
  r.objective_normalized = f;
  r.objective = f + inst.objective_offset();
  r.residual = max_constraint_violation(inst, res.xbar);
  r.final_fr = regularized_objective(inst, res.y_final, P.beta).value;
  r.max_box_excursion = *std::max_element(excursion.begin(), excursion.end());
  r.messages_per_round = a.nnz();
  r.solution = inst.to_raw_allocation(res.xbar);
  r.wall_time_s = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  return res;
}

}  // namespace fairpack

#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "fairpack/instance.hpp"
#include "fairpack/primal.hpp"
#include "fairpack/report.hpp"

namespace fairpack {

// Counts every matrix read made by an agent. Agents can only reach the matrix
// through their own AgentView, and a view refuses (and records) any attempt
// to read another agent's column.
class AccessMonitor {
 public:
  void record_own() { own_reads_.fetch_add(1, std::memory_order_relaxed); }
  void record_foreign() {
    foreign_reads_.fetch_add(1, std::memory_order_relaxed);
  }
  std::uint64_t own_reads() const { return own_reads_.load(); }
  std::uint64_t foreign_reads() const { return foreign_reads_.load(); }

 private:
  std::atomic<std::uint64_t> own_reads_{0};
  std::atomic<std::uint64_t> foreign_reads_{0};
};

struct AgentGlobals {
  std::size_t m = 0;
  std::size_t n = 0;
  double eps = 0.0;
  double beta = 0.0;
  double omega = 0.0;
  double L = 0.0;
  double tau = 0.0;
};

// What agent j knows: its column of A, the global constants, its own iterates.
class AgentView {
 public:
  AgentView(std::size_t agent_id, std::vector<Entry> column,
            const AgentGlobals& globals, AccessMonitor* monitor);

  std::size_t agent_id() const { return id_; }
  const AgentGlobals& globals() const { return globals_; }

  // The agent's column (entries indexed by row). Counted as one read.
  std::span<const Entry> column() const;
  // A_ij. Throws Error(LocalityViolation) when j is not this agent.
  double coefficient(std::size_t i, std::size_t j) const;

  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double eta = 0.0;

 private:
  std::size_t id_;
  std::vector<Entry> column_;
  AgentGlobals globals_;
  AccessMonitor* monitor_;
};

// Slack of constraint i delivered to one participating agent.
struct RoundMessage {
  std::uint64_t round = 0;
  std::size_t constraint = 0;
  std::size_t agent = 0;
  double slack = 0.0;  // (A exp x)_i - 1
};

struct DistributedOptions {
  // Worker threads for the agent and aggregator phases; 1 runs inline.
  std::size_t threads = 1;
  // When set, every delivered message is written as "round,constraint,agent,slack".
  std::ostream* message_trace = nullptr;
  // Optional access counter; the run uses an internal one otherwise.
  AccessMonitor* monitor = nullptr;
};

struct DistributedResult {
  std::vector<double> xbar;
  std::vector<double> y_final;
  PrimalParams params;
  std::uint64_t rounds = 0;
  std::uint64_t messages_per_round = 0;
  std::uint64_t total_messages = 0;
  std::uint64_t foreign_reads = 0;
  SolveReport report;
};

// Runs the primal method as synchronous rounds between n agents and m
// constraint aggregators. Throws Error(RoundsCapExceeded) if rounds_cap is
// below the iteration count the method needs.
DistributedResult run_distributed(const ProblemInstance& inst, double eps,
                                  std::uint64_t rounds_cap,
                                  const DistributedOptions& opts = {});

}  // namespace fairpack

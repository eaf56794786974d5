#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "fairpack/instance.hpp"
#include "fairpack/report.hpp"

namespace fairpack {

struct YlState {
  std::uint64_t k = 0;
  std::vector<double> lambda;
  std::vector<double> h;
  std::vector<double> p;
  // log of the volume of {x >= 0 : <h, x> <= 1} = -sum log h - log n!
  double log_volume = 0.0;
};

// Starts from the average of each column's largest row (smallest index on ties).
YlState yl_initial(const ProblemInstance& inst);

// Default iteration cap: ceil(2 (n+1)^2 n log n) + 1.
std::uint64_t yl_default_cap(std::size_t n);

struct YlStep {
  std::uint64_t k = 0;
  std::size_t row = 0;  // the most violated row that was mixed in
  double ghat = 0.0;    // proxy value before the step
  double log_volume = 0.0;  // after the step
  double log_ratio = 0.0;   // log(vol_after / vol_before)
};

struct YlOptions {
  std::optional<std::uint64_t> iter_cap;
  // "k,row,ghat,log_volume" rows, one per iteration.
  std::ostream* trace = nullptr;
  bool keep_steps = true;
};

struct YlResult {
  YlState state;
  std::vector<YlStep> steps;
  double proxy = 0.0;
  double worst_log_ratio = 0.0;  // max over steps; should be <= -1/(2(n+1)^2)
  SolveReport report;
};

// Mixes the most violated row into lambda with weight 1/n^2 until the
// centroid is covered up to 1 + 1/n. Throws Error(IterCapExceeded).
YlResult yl_stage(const ProblemInstance& inst, const YlOptions& opts = {});

}  // namespace fairpack

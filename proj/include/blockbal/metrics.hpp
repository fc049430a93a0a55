#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "blockbal/distribution.hpp"
#include "blockbal/grid.hpp"

namespace blockbal {

/// One row of a replay report: the state after the balancing step of an
/// interval.
struct IntervalReport {
   std::int64_t step = 0;
   std::string strategy;
   int n_procs = 1;
   double load_imbalance = 0.0;
   std::int64_t edge_cut = 0;
   double max_load = 0.0;    // simulated makespan contribution
   double total_load = 0.0;
};

/// Per-process sums of the owned block weights.
std::vector<double> process_loads(const BlockGrid& grid, const Assignment& assignment,
                                  const WeightMap& weights);

/// max(load) / mean(load) - 1; zero means perfectly balanced.
double load_imbalance(std::span<const double> loads);

/// Sum over intervals of the maximum per-process load; the desk-scale proxy
/// for wall-clock time to solution.
double simulated_makespan(std::span<const IntervalReport> reports);

}  // namespace blockbal

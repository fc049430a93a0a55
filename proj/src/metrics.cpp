#include "blockbal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blockbal {

std::vector<double> process_loads(const BlockGrid& grid, const Assignment& assignment,
                                  const WeightMap& weights) {
   const auto violations = validate_assignment(grid, assignment);
   if (!violations.empty())
      throw std::invalid_argument("invalid assignment: " + violations.front());
   if (static_cast<std::int64_t>(weights.size()) != grid.block_count())
      throw std::invalid_argument("weight map does not cover the grid");

   std::vector<double> loads(static_cast<std::size_t>(assignment.process_count), 0.0);
   for (BlockId b = 0; b < grid.block_count(); ++b)
      loads[static_cast<std::size_t>(assignment.owner[static_cast<std::size_t>(b)])] +=
         weights[static_cast<std::size_t>(b)];
   return loads;
}

double load_imbalance(std::span<const double> loads) {
   if (loads.empty())
      throw std::invalid_argument("load imbalance of an empty load list");
   double total = 0.0;
   double max_load = 0.0;
   for (double l : loads) {
      if (l < 0.0 || !std::isfinite(l))
         throw std::invalid_argument("loads must be non-negative and finite");
      total += l;
      max_load = std::max(max_load, l);
   }
   if (!(total > 0.0))
      throw std::invalid_argument("load imbalance needs a positive total load");
   const double mean = total / static_cast<double>(loads.size());
   return max_load / mean - 1.0;
}

double simulated_makespan(std::span<const IntervalReport> reports) {
   double total = 0.0;
   for (const IntervalReport& r : reports)
      total += r.max_load;
   return total;
}

}  // namespace blockbal

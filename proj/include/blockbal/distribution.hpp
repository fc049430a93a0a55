#pragma once

#include <cstdint>
#include <vector>

#include "blockbal/grid.hpp"
#include "blockbal/sfc.hpp"

namespace blockbal {

/// Block weight in milliseconds, indexed by block id. All weights must be
/// positive and finite wherever a WeightMap is consumed.
using WeightMap = std::vector<double>;

/// Greedy segmentation of the curve ordering: walking the curve, a block
/// joins process p while the accumulated weight plus half the block's weight
/// stays below the cumulative target (p+1) * total / n_procs. Every process
/// receives at least one block; segments are contiguous along the curve.
Assignment sfc_partition(const BlockGrid& grid, const WeightMap& weights, int n_procs,
                         CurveKind kind);

/// Communication-volume weight of one block adjacency: face -> b_s^2,
/// edge -> b_s, corner -> 1.
std::int64_t edge_weight(Adjacency cls, int block_size);

/// Sum of edge weights over unordered adjacent block pairs whose owners
/// differ; each pair counted once.
std::int64_t edge_cut(const BlockGrid& grid, const Assignment& assignment, int block_size);

/// One sweep of diffusive exchange. Processes are visited in index order;
/// a visited process sends at most one boundary block towards its least
/// loaded lighter neighbor, choosing the block whose weight is closest to
/// half the load gap (and strictly below the gap). Loads update as the sweep
/// proceeds, so the maximum process load never increases.
Assignment diffusive_step(const BlockGrid& grid, const WeightMap& weights,
                          const Assignment& assignment);

struct DiffusionResult {
   Assignment assignment;
   int iterations = 0;  // sweeps actually applied before the fixed point
};

DiffusionResult diffusive_balance(const BlockGrid& grid, const WeightMap& weights,
                                  const Assignment& assignment, int max_iters);

/// Per-change record for inspecting the refinement run.
struct RefineTrace {
   struct Step {
      std::int64_t cut_before = 0;
      std::int64_t cut_after = 0;
      double receiver_load_after = 0.0;  // max over the processes that gained weight
      bool swap = false;
   };
   std::vector<Step> steps;
};

/// Edge-cut hill climbing under a load bound of tolerance * (total weight /
/// n_procs): single boundary-block relocations and boundary-block swaps
/// compete per round; the change with the largest cut reduction wins. Every
/// accepted change keeps the touched process loads within the bound and no
/// process empty. Inputs already violating the bound are refined as-is.
Assignment refine_partition(const BlockGrid& grid, const WeightMap& weights,
                            const Assignment& assignment, double tolerance,
                            RefineTrace* trace = nullptr);

}  // namespace blockbal

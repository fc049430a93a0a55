#include "blockbal/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace blockbal {

namespace {

void check_weights(const BlockGrid& grid, const WeightMap& weights) {
   if (static_cast<std::int64_t>(weights.size()) != grid.block_count())
      throw std::invalid_argument("weight map does not cover the grid");
   for (double w : weights)
      if (!(w > 0.0) || !std::isfinite(w))
         throw std::invalid_argument("block weights must be positive and finite");
}

void check_assignment(const BlockGrid& grid, const Assignment& assignment) {
   const auto violations = validate_assignment(grid, assignment);
   if (!violations.empty())
      throw std::invalid_argument("invalid assignment: " + violations.front());
}

std::vector<double> loads_of(const BlockGrid& grid, const Assignment& assignment,
                             const WeightMap& weights) {
   std::vector<double> loads(static_cast<std::size_t>(assignment.process_count), 0.0);
   for (BlockId b = 0; b < grid.block_count(); ++b)
      loads[static_cast<std::size_t>(assignment.owner[static_cast<std::size_t>(b)])] +=
         weights[static_cast<std::size_t>(b)];
   return loads;
}

std::vector<int> block_counts(const Assignment& assignment) {
   std::vector<int> counts(static_cast<std::size_t>(assignment.process_count), 0);
   for (int p : assignment.owner)
      ++counts[static_cast<std::size_t>(p)];
   return counts;
}

}  // namespace

Assignment sfc_partition(const BlockGrid& grid, const WeightMap& weights, int n_procs,
                         CurveKind kind) {
   check_weights(grid, weights);
   if (n_procs < 1)
      throw std::invalid_argument("process count must be >= 1");
   if (n_procs > grid.block_count())
      throw std::invalid_argument("more processes than blocks");

   const std::vector<BlockId> order = curve_order(grid, kind);
   double total = 0.0;
   for (double w : weights)
      total += w;
   const double target = total / n_procs;

   Assignment assignment;
   assignment.process_count = n_procs;
   assignment.owner.assign(static_cast<std::size_t>(grid.block_count()), Assignment::kUnassigned);

   int p = 0;
   int count_p = 0;
   double accumulated = 0.0;
   const std::int64_t n_blocks = grid.block_count();
   for (std::int64_t pos = 0; pos < n_blocks; ++pos) {
      const BlockId b = order[static_cast<std::size_t>(pos)];
      const double w = weights[static_cast<std::size_t>(b)];
      const std::int64_t remaining = n_blocks - pos;  // including this block
      if (p < n_procs - 1 && count_p > 0) {
         const bool forced = remaining == static_cast<std::int64_t>(n_procs - 1 - p);
         const bool past_target = accumulated + 0.5 * w > target * (p + 1);
         if (forced || past_target) {
            ++p;
            count_p = 0;
         }
      }
      assignment.owner[static_cast<std::size_t>(b)] = p;
      ++count_p;
      accumulated += w;
   }
   return assignment;
}

std::int64_t edge_weight(Adjacency cls, int block_size) {
   if (block_size < 1)
      throw std::invalid_argument("block size must be >= 1");
   const std::int64_t b = block_size;
   switch (cls) {
      case Adjacency::Face: return b * b;
      case Adjacency::Edge: return b;
      case Adjacency::Corner: return 1;
   }
   return 0;
}

std::int64_t edge_cut(const BlockGrid& grid, const Assignment& assignment, int block_size) {
   check_assignment(grid, assignment);
   std::int64_t cut = 0;
   for (BlockId b = 0; b < grid.block_count(); ++b) {
      for (const auto& [nb, cls] : grid.neighbors(b)) {
         if (nb <= b)
            continue;  // count each unordered pair once
         if (assignment.owner[static_cast<std::size_t>(b)] !=
             assignment.owner[static_cast<std::size_t>(nb)])
            cut += edge_weight(cls, block_size);
      }
   }
   return cut;
}

namespace {

// Adjacency matrix of the process graph. Processes owning adjacent blocks
// are neighbors; a process without blocks is reachable from everyone, since
// block adjacency alone would leave it starved forever.
std::vector<std::vector<char>> process_graph(const BlockGrid& grid, const Assignment& assignment,
                                             const std::vector<int>& counts) {
   const auto n = static_cast<std::size_t>(assignment.process_count);
   std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
   for (BlockId b = 0; b < grid.block_count(); ++b) {
      const int p = assignment.owner[static_cast<std::size_t>(b)];
      for (const auto& [nb, cls] : grid.neighbors(b)) {
         const int q = assignment.owner[static_cast<std::size_t>(nb)];
         if (p != q) {
            adj[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] = 1;
            adj[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)] = 1;
         }
      }
   }
   for (std::size_t p = 0; p < n; ++p) {
      if (counts[p] == 0) {
         for (std::size_t q = 0; q < n; ++q) {
            if (p != q) {
               adj[p][q] = 1;
               adj[q][p] = 1;
            }
         }
      }
   }
   return adj;
}

}  // namespace

Assignment diffusive_step(const BlockGrid& grid, const WeightMap& weights,
                          const Assignment& assignment) {
   check_weights(grid, weights);
   check_assignment(grid, assignment);

   Assignment result = assignment;
   std::vector<double> loads = loads_of(grid, result, weights);
   std::vector<int> counts = block_counts(result);
   const auto graph = process_graph(grid, assignment, counts);
   const int n_procs = result.process_count;

   for (int p = 0; p < n_procs; ++p) {
      const auto sp = static_cast<std::size_t>(p);
      if (counts[sp] <= 1)
         continue;  // sending would empty the process

      // Least loaded lighter neighbor; ties resolve to the lowest index.
      int receiver = -1;
      for (int q = 0; q < n_procs; ++q) {
         const auto sq = static_cast<std::size_t>(q);
         if (q == p || !graph[sp][sq])
            continue;
         if (loads[sq] < loads[sp] && (receiver < 0 || loads[sq] < loads[static_cast<std::size_t>(receiver)]))
            receiver = q;
      }
      if (receiver < 0)
         continue;
      const auto sr = static_cast<std::size_t>(receiver);
      const double gap = loads[sp] - loads[sr];

      // Candidate blocks: owned by p and touching the receiver's region
      // (any block, when the receiver owns nothing yet). Weight must stay
      // strictly below the gap: a move of exactly the gap swaps the two
      // loads and can cycle.
      BlockId best = -1;
      double best_dist = std::numeric_limits<double>::infinity();
      for (BlockId b = 0; b < grid.block_count(); ++b) {
         if (result.owner[static_cast<std::size_t>(b)] != p)
            continue;
         if (counts[sr] > 0) {
            bool touches = false;
            for (const auto& [nb, cls] : grid.neighbors(b)) {
               if (result.owner[static_cast<std::size_t>(nb)] == receiver) {
                  touches = true;
                  break;
               }
            }
            if (!touches)
               continue;
         }
         const double w = weights[static_cast<std::size_t>(b)];
         if (!(w < gap))
            continue;
         const double dist = std::abs(w - 0.5 * gap);
         if (dist < best_dist) {
            best_dist = dist;
            best = b;
         }
      }
      if (best < 0)
         continue;

      result.owner[static_cast<std::size_t>(best)] = receiver;
      const double w = weights[static_cast<std::size_t>(best)];
      loads[sp] -= w;
      loads[sr] += w;
      --counts[sp];
      ++counts[sr];
   }
   return result;
}

DiffusionResult diffusive_balance(const BlockGrid& grid, const WeightMap& weights,
                                  const Assignment& assignment, int max_iters) {
   if (max_iters < 0)
      throw std::invalid_argument("max iterations must be >= 0");
   DiffusionResult result{assignment, 0};
   for (int it = 0; it < max_iters; ++it) {
      Assignment next = diffusive_step(grid, weights, result.assignment);
      if (next.owner == result.assignment.owner)
         break;
      result.assignment = std::move(next);
      ++result.iterations;
   }
   return result;
}

namespace {

// Cut change when `block` moves from its owner to `to`: edges into the old
// region open, edges into the new region close.
std::int64_t move_cut_delta(const BlockGrid& grid, const Assignment& assignment, BlockId block,
                            int to, int block_size) {
   const int from = assignment.owner[static_cast<std::size_t>(block)];
   std::int64_t delta = 0;
   for (const auto& [nb, cls] : grid.neighbors(block)) {
      const int q = assignment.owner[static_cast<std::size_t>(nb)];
      if (q == from)
         delta += edge_weight(cls, block_size);
      else if (q == to)
         delta -= edge_weight(cls, block_size);
   }
   return delta;
}

bool blocks_adjacent(const BlockGrid& grid, BlockId a, BlockId b, Adjacency* cls_out) {
   for (const auto& [nb, cls] : grid.neighbors(a)) {
      if (nb == b) {
         if (cls_out)
            *cls_out = cls;
         return true;
      }
   }
   return false;
}

}  // namespace

Assignment refine_partition(const BlockGrid& grid, const WeightMap& weights,
                            const Assignment& assignment, double tolerance, RefineTrace* trace) {
   check_weights(grid, weights);
   check_assignment(grid, assignment);
   if (!(tolerance >= 1.0))
      throw std::invalid_argument("tolerance must be >= 1");

   Assignment result = assignment;
   std::vector<double> loads = loads_of(grid, result, weights);
   std::vector<int> counts = block_counts(result);
   const int block_size = grid.block_size();

   double total = 0.0;
   for (double w : weights)
      total += w;
   const double bound = tolerance * total / result.process_count;

   std::int64_t cut = edge_cut(grid, result, block_size);

   while (true) {
      // Boundary blocks and, per block, the set of neighboring processes.
      std::vector<BlockId> boundary;
      std::vector<std::vector<int>> neighbor_procs;
      for (BlockId b = 0; b < grid.block_count(); ++b) {
         const int p = result.owner[static_cast<std::size_t>(b)];
         std::vector<int> procs;
         for (const auto& [nb, cls] : grid.neighbors(b)) {
            const int q = result.owner[static_cast<std::size_t>(nb)];
            if (q != p && std::find(procs.begin(), procs.end(), q) == procs.end())
               procs.push_back(q);
         }
         if (!procs.empty()) {
            std::sort(procs.begin(), procs.end());
            boundary.push_back(b);
            neighbor_procs.push_back(std::move(procs));
         }
      }

      std::int64_t best_delta = 0;  // only strictly improving changes accepted
      BlockId best_block = -1;
      int best_to = -1;
      BlockId best_swap_a = -1, best_swap_b = -1;
      bool best_is_swap = false;

      for (std::size_t i = 0; i < boundary.size(); ++i) {
         const BlockId b = boundary[i];
         const int from = result.owner[static_cast<std::size_t>(b)];
         const double w = weights[static_cast<std::size_t>(b)];
         if (counts[static_cast<std::size_t>(from)] <= 1)
            continue;
         for (int to : neighbor_procs[i]) {
            if (loads[static_cast<std::size_t>(to)] + w > bound)
               continue;
            const std::int64_t delta = move_cut_delta(grid, result, b, to, block_size);
            if (delta < best_delta) {
               best_delta = delta;
               best_block = b;
               best_to = to;
               best_is_swap = false;
            }
         }
      }

      for (std::size_t i = 0; i < boundary.size(); ++i) {
         for (std::size_t j = i + 1; j < boundary.size(); ++j) {
            const BlockId a = boundary[i], b = boundary[j];
            const int pa = result.owner[static_cast<std::size_t>(a)];
            const int pb = result.owner[static_cast<std::size_t>(b)];
            if (pa == pb)
               continue;
            const double wa = weights[static_cast<std::size_t>(a)];
            const double wb = weights[static_cast<std::size_t>(b)];
            if (loads[static_cast<std::size_t>(pa)] - wa + wb > bound ||
                loads[static_cast<std::size_t>(pb)] - wb + wa > bound)
               continue;
            std::int64_t delta = move_cut_delta(grid, result, a, pb, block_size) +
                                 move_cut_delta(grid, result, b, pa, block_size);
            Adjacency cls;
            if (blocks_adjacent(grid, a, b, &cls)) {
               // The shared edge stays cut after the swap; the two move
               // deltas each removed it once.
               delta += 2 * edge_weight(cls, block_size);
            }
            if (delta < best_delta) {
               best_delta = delta;
               best_swap_a = a;
               best_swap_b = b;
               best_is_swap = true;
            }
         }
      }

      if (best_delta >= 0)
         break;

      RefineTrace::Step step;
      step.cut_before = cut;
      if (!best_is_swap) {
         const int from = result.owner[static_cast<std::size_t>(best_block)];
         result.owner[static_cast<std::size_t>(best_block)] = best_to;
         const double w = weights[static_cast<std::size_t>(best_block)];
         loads[static_cast<std::size_t>(from)] -= w;
         loads[static_cast<std::size_t>(best_to)] += w;
         --counts[static_cast<std::size_t>(from)];
         ++counts[static_cast<std::size_t>(best_to)];
         step.receiver_load_after = loads[static_cast<std::size_t>(best_to)];
      } else {
         const int pa = result.owner[static_cast<std::size_t>(best_swap_a)];
         const int pb = result.owner[static_cast<std::size_t>(best_swap_b)];
         result.owner[static_cast<std::size_t>(best_swap_a)] = pb;
         result.owner[static_cast<std::size_t>(best_swap_b)] = pa;
         const double wa = weights[static_cast<std::size_t>(best_swap_a)];
         const double wb = weights[static_cast<std::size_t>(best_swap_b)];
         loads[static_cast<std::size_t>(pa)] += wb - wa;
         loads[static_cast<std::size_t>(pb)] += wa - wb;
         step.receiver_load_after = std::max(loads[static_cast<std::size_t>(pa)],
                                             loads[static_cast<std::size_t>(pb)]);
         step.swap = true;
      }
      cut += best_delta;
      step.cut_after = cut;
      if (trace)
         trace->steps.push_back(step);
   }
   return result;
}

}  // namespace blockbal

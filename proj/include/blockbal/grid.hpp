#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace blockbal {

using BlockId = std::int64_t;

struct GridDims {
   int x = 1;
   int y = 1;
   int z = 1;
};

inline bool operator==(const GridDims& a, const GridDims& b) {
   return a.x == b.x && a.y == b.y && a.z == b.z;
}

/// How two distinct blocks of the lattice touch within the 26-neighborhood.
enum class Adjacency { Face, Edge, Corner };

/// Uniform lattice of cubic blocks, block_size^3 cells each.
/// Ids enumerate (i,j,k) with k varying slowest and i fastest, so all
/// downstream orderings are reproducible.
class BlockGrid {
 public:
   BlockGrid(GridDims dims, int block_size);

   const GridDims& dims() const { return dims_; }
   int block_size() const { return block_size_; }

   std::int64_t block_count() const { return count_; }
   std::int64_t cells_per_block() const {
      const std::int64_t b = block_size_;
      return b * b * b;
   }

   BlockId block_id(int i, int j, int k) const;
   std::array<int, 3> block_coords(BlockId id) const;
   bool valid_id(BlockId id) const { return id >= 0 && id < count_; }

   /// All distinct in-bounds blocks sharing a face, edge, or corner with
   /// `id`, in a fixed (dk,dj,di)-loop order.
   std::vector<std::pair<BlockId, Adjacency>> neighbors(BlockId id) const;

 private:
   GridDims dims_;
   int block_size_;
   std::int64_t count_;
};

BlockGrid build_grid(GridDims dims, int block_size);

/// Per-block state vector feeding the workload estimator.
struct BlockQuantities {
   std::int64_t cells = 0;                // C
   std::int64_t fluid_cells = 0;          // F
   std::int64_t near_boundary_cells = 0;  // B
   std::int64_t local_particles = 0;      // P_L
   std::int64_t shadow_particles = 0;     // P_S
   std::int64_t contacts = 0;             // K
   std::int64_t sub_cycles = 1;           // S
};

/// Block -> process map, dense over block ids. `kUnassigned` marks holes.
struct Assignment {
   static constexpr int kUnassigned = -1;

   std::vector<int> owner;  // indexed by block id
   int process_count = 1;
};

/// Empty result means the assignment honors its invariants (total, in-range).
std::vector<std::string> validate_assignment(const BlockGrid& grid, const Assignment& assignment);

const char* to_string(Adjacency a);

}  // namespace blockbal

#include "blockbal/grid.hpp"

#include <stdexcept>

namespace blockbal {

BlockGrid::BlockGrid(GridDims dims, int block_size) : dims_(dims), block_size_(block_size) {
   if (dims.x < 1 || dims.y < 1 || dims.z < 1)
      throw std::invalid_argument("grid dimensions must be >= 1");
   if (block_size < 1)
      throw std::invalid_argument("block size must be >= 1");
   count_ = static_cast<std::int64_t>(dims.x) * dims.y * dims.z;
}

BlockGrid build_grid(GridDims dims, int block_size) {
   return BlockGrid(dims, block_size);
}

BlockId BlockGrid::block_id(int i, int j, int k) const {
   if (i < 0 || i >= dims_.x || j < 0 || j >= dims_.y || k < 0 || k >= dims_.z)
      throw std::invalid_argument("block coordinates out of range");
   return (static_cast<std::int64_t>(k) * dims_.y + j) * dims_.x + i;
}

std::array<int, 3> BlockGrid::block_coords(BlockId id) const {
   if (!valid_id(id))
      throw std::invalid_argument("invalid block id");
   const int i = static_cast<int>(id % dims_.x);
   const int j = static_cast<int>((id / dims_.x) % dims_.y);
   const int k = static_cast<int>(id / (static_cast<std::int64_t>(dims_.x) * dims_.y));
   return {i, j, k};
}

std::vector<std::pair<BlockId, Adjacency>> BlockGrid::neighbors(BlockId id) const {
   const auto [i, j, k] = block_coords(id);
   std::vector<std::pair<BlockId, Adjacency>> result;
   result.reserve(26);
   for (int dk = -1; dk <= 1; ++dk) {
      for (int dj = -1; dj <= 1; ++dj) {
         for (int di = -1; di <= 1; ++di) {
            if (di == 0 && dj == 0 && dk == 0)
               continue;
            const int ni = i + di, nj = j + dj, nk = k + dk;
            if (ni < 0 || ni >= dims_.x || nj < 0 || nj >= dims_.y || nk < 0 || nk >= dims_.z)
               continue;
            const int touching = (di != 0) + (dj != 0) + (dk != 0);
            const Adjacency cls = touching == 1   ? Adjacency::Face
                                  : touching == 2 ? Adjacency::Edge
                                                  : Adjacency::Corner;
            result.emplace_back(block_id(ni, nj, nk), cls);
         }
      }
   }
   return result;
}

std::vector<std::string> validate_assignment(const BlockGrid& grid, const Assignment& assignment) {
   std::vector<std::string> violations;
   if (assignment.process_count < 1)
      violations.push_back("process count must be >= 1");
   const std::int64_t n = grid.block_count();
   if (static_cast<std::int64_t>(assignment.owner.size()) != n)
      violations.push_back("owner map covers " + std::to_string(assignment.owner.size()) +
                           " blocks, grid has " + std::to_string(n));
   const std::int64_t limit = std::min<std::int64_t>(n, static_cast<std::int64_t>(assignment.owner.size()));
   for (std::int64_t b = 0; b < limit; ++b) {
      const int p = assignment.owner[static_cast<std::size_t>(b)];
      if (p == Assignment::kUnassigned)
         violations.push_back("unassigned block " + std::to_string(b));
      else if (p < 0 || p >= assignment.process_count)
         violations.push_back("owner out of range for block " + std::to_string(b) + ": " +
                              std::to_string(p));
   }
   return violations;
}

const char* to_string(Adjacency a) {
   switch (a) {
      case Adjacency::Face: return "face";
      case Adjacency::Edge: return "edge";
      case Adjacency::Corner: return "corner";
   }
   return "?";
}

}  // namespace blockbal

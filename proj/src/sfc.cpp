#include "blockbal/sfc.hpp"

#include <algorithm>
#include <stdexcept>

namespace blockbal {

namespace {

constexpr int kMaxOrder = 20;  // 3*20 = 60 index bits

void check_domain(const std::array<std::uint32_t, 3>& coord, int order) {
   if (order < 0 || order > kMaxOrder)
      throw std::invalid_argument("curve order out of range [0, 20]");
   const std::uint64_t side = std::uint64_t{1} << order;
   for (std::uint32_t c : coord)
      if (c >= side)
         throw std::invalid_argument("coordinate out of range for curve order");
}

}  // namespace

std::uint64_t morton_index(std::array<std::uint32_t, 3> coord, int order) {
   check_domain(coord, order);
   std::uint64_t index = 0;
   for (int bit = 0; bit < order; ++bit) {
      index |= (static_cast<std::uint64_t>(coord[0] >> bit) & 1u) << (3 * bit);
      index |= (static_cast<std::uint64_t>(coord[1] >> bit) & 1u) << (3 * bit + 1);
      index |= (static_cast<std::uint64_t>(coord[2] >> bit) & 1u) << (3 * bit + 2);
   }
   return index;
}

std::uint64_t hilbert_index(std::array<std::uint32_t, 3> coord, int order) {
   check_domain(coord, order);
   if (order == 0)
      return 0;

   // Skilling's axes-to-transpose transform.
   std::array<std::uint32_t, 3> x = coord;
   const std::uint32_t top = std::uint32_t{1} << (order - 1);
   for (std::uint32_t q = top; q > 1; q >>= 1) {
      const std::uint32_t p = q - 1;
      for (int i = 0; i < 3; ++i) {
         if (x[static_cast<std::size_t>(i)] & q) {
            x[0] ^= p;  // invert low bits of the first axis
         } else {
            const std::uint32_t t = (x[0] ^ x[static_cast<std::size_t>(i)]) & p;
            x[0] ^= t;
            x[static_cast<std::size_t>(i)] ^= t;
         }
      }
   }
   for (int i = 1; i < 3; ++i)
      x[static_cast<std::size_t>(i)] ^= x[static_cast<std::size_t>(i - 1)];
   std::uint32_t t = 0;
   for (std::uint32_t q = top; q > 1; q >>= 1)
      if (x[2] & q)
         t ^= q - 1;
   for (auto& axis : x)
      axis ^= t;

   // Interleave the transpose form, most significant plane first.
   std::uint64_t index = 0;
   for (int bit = order - 1; bit >= 0; --bit)
      for (int i = 0; i < 3; ++i)
         index = (index << 1) | ((x[static_cast<std::size_t>(i)] >> bit) & 1u);
   return index;
}

std::vector<BlockId> curve_order(const BlockGrid& grid, CurveKind kind) {
   const GridDims d = grid.dims();
   const int longest = std::max({d.x, d.y, d.z});
   int order = 0;
   while ((1 << order) < longest)
      ++order;

   std::vector<std::pair<std::uint64_t, BlockId>> keyed;
   keyed.reserve(static_cast<std::size_t>(grid.block_count()));
   for (BlockId id = 0; id < grid.block_count(); ++id) {
      const auto [i, j, k] = grid.block_coords(id);
      const std::array<std::uint32_t, 3> coord = {static_cast<std::uint32_t>(i),
                                                  static_cast<std::uint32_t>(j),
                                                  static_cast<std::uint32_t>(k)};
      const std::uint64_t key =
         kind == CurveKind::Morton ? morton_index(coord, order) : hilbert_index(coord, order);
      keyed.emplace_back(key, id);
   }
   std::sort(keyed.begin(), keyed.end());

   std::vector<BlockId> order_out;
   order_out.reserve(keyed.size());
   for (const auto& [key, id] : keyed)
      order_out.push_back(id);
   return order_out;
}

const char* to_string(CurveKind kind) {
   return kind == CurveKind::Morton ? "morton" : "hilbert";
}

}  // namespace blockbal

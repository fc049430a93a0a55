#include <doctest.h>

#include <map>
#include <set>

#include "blockbal/grid.hpp"

using namespace blockbal;

TEST_CASE("build_grid block counts") {
   CHECK(build_grid({1, 1, 1}, 32).block_count() == 1);
   CHECK(build_grid({1, 1, 1}, 32).cells_per_block() == 32768);
   CHECK(build_grid({4, 4, 5}, 32).block_count() == 80);
   CHECK(build_grid({12, 12, 16}, 32).block_count() == 2304);
}

TEST_CASE("build_grid rejects bad arguments") {
   CHECK_THROWS_AS(build_grid({0, 1, 1}, 32), std::invalid_argument);
   CHECK_THROWS_AS(build_grid({1, -2, 1}, 32), std::invalid_argument);
   CHECK_THROWS_AS(build_grid({1, 1, 1}, 0), std::invalid_argument);
}

TEST_CASE("block id round trip is a bijection") {
   for (const GridDims dims : {GridDims{1, 1, 1}, GridDims{3, 4, 2}, GridDims{5, 5, 5}}) {
      const BlockGrid grid = build_grid(dims, 4);
      std::set<BlockId> seen;
      for (int k = 0; k < dims.z; ++k)
         for (int j = 0; j < dims.y; ++j)
            for (int i = 0; i < dims.x; ++i) {
               const BlockId id = grid.block_id(i, j, k);
               CHECK(seen.insert(id).second);  // injective
               const auto coords = grid.block_coords(id);
               CHECK(coords[0] == i);
               CHECK(coords[1] == j);
               CHECK(coords[2] == k);
            }
      CHECK(static_cast<std::int64_t>(seen.size()) == grid.block_count());
      CHECK(*seen.begin() == 0);
      CHECK(*seen.rbegin() == grid.block_count() - 1);
   }
}

TEST_CASE("id ordering is k-major") {
   const BlockGrid grid = build_grid({3, 2, 2}, 4);
   CHECK(grid.block_id(0, 0, 0) == 0);
   CHECK(grid.block_id(1, 0, 0) == 1);
   CHECK(grid.block_id(0, 1, 0) == 3);
   CHECK(grid.block_id(0, 0, 1) == 6);
}

namespace {

int axis_span(int coord, int extent) {
   return 1 + (coord > 0 ? 1 : 0) + (coord < extent - 1 ? 1 : 0);
}

}  // namespace

TEST_CASE("neighbor classes on canonical blocks") {
   const BlockGrid interior_grid = build_grid({3, 3, 3}, 8);
   const auto interior = interior_grid.neighbors(interior_grid.block_id(1, 1, 1));
   int face = 0, edge = 0, corner = 0;
   for (const auto& [id, cls] : interior) {
      face += cls == Adjacency::Face;
      edge += cls == Adjacency::Edge;
      corner += cls == Adjacency::Corner;
   }
   CHECK(interior.size() == 26);
   CHECK(face == 6);
   CHECK(edge == 12);
   CHECK(corner == 8);

   const BlockGrid small = build_grid({2, 2, 2}, 8);
   const auto at_corner = small.neighbors(small.block_id(0, 0, 0));
   face = edge = corner = 0;
   for (const auto& [id, cls] : at_corner) {
      face += cls == Adjacency::Face;
      edge += cls == Adjacency::Edge;
      corner += cls == Adjacency::Corner;
   }
   CHECK(at_corner.size() == 7);
   CHECK(face == 3);
   CHECK(edge == 3);
   CHECK(corner == 1);

   CHECK(build_grid({1, 1, 1}, 8).neighbors(0).empty());
}

TEST_CASE("neighbors rejects invalid ids") {
   const BlockGrid grid = build_grid({2, 2, 2}, 8);
   CHECK_THROWS_AS(grid.neighbors(-1), std::invalid_argument);
   CHECK_THROWS_AS(grid.neighbors(8), std::invalid_argument);
}

TEST_CASE("neighbors are symmetric and without duplicates") {
   for (const GridDims dims : {GridDims{2, 3, 4}, GridDims{5, 5, 5}, GridDims{1, 6, 2}}) {
      const BlockGrid grid = build_grid(dims, 4);
      std::map<std::pair<BlockId, BlockId>, Adjacency> forward;
      for (BlockId b = 0; b < grid.block_count(); ++b) {
         std::set<BlockId> uniq;
         for (const auto& [nb, cls] : grid.neighbors(b)) {
            CHECK(uniq.insert(nb).second);
            forward[{b, nb}] = cls;
         }
      }
      for (const auto& [pair, cls] : forward) {
         const auto reverse = forward.find({pair.second, pair.first});
         REQUIRE(reverse != forward.end());
         CHECK(reverse->second == cls);
      }
   }
}

TEST_CASE("neighbor census matches the lattice combinatorics") {
   for (const GridDims dims : {GridDims{5, 5, 5}, GridDims{2, 4, 3}, GridDims{1, 1, 7}}) {
      const BlockGrid grid = build_grid(dims, 4);
      for (BlockId b = 0; b < grid.block_count(); ++b) {
         const auto [i, j, k] = grid.block_coords(b);
         const int ax = axis_span(i, dims.x), ay = axis_span(j, dims.y), az = axis_span(k, dims.z);
         int face = 0, edge = 0, corner = 0;
         for (const auto& [id, cls] : grid.neighbors(b)) {
            face += cls == Adjacency::Face;
            edge += cls == Adjacency::Edge;
            corner += cls == Adjacency::Corner;
         }
         CHECK(face == (ax - 1) + (ay - 1) + (az - 1));
         CHECK(edge == (ax - 1) * (ay - 1) + (ax - 1) * (az - 1) + (ay - 1) * (az - 1));
         CHECK(corner == (ax - 1) * (ay - 1) * (az - 1));
         CHECK(face + edge + corner == ax * ay * az - 1);
      }
   }
}

TEST_CASE("validate_assignment reports violations") {
   const BlockGrid grid = build_grid({2, 2, 2}, 8);

   Assignment ok;
   ok.process_count = 1;
   ok.owner.assign(8, 0);
   CHECK(validate_assignment(grid, ok).empty());

   Assignment unassigned = ok;
   unassigned.owner[3] = Assignment::kUnassigned;
   const auto missing = validate_assignment(grid, unassigned);
   REQUIRE(missing.size() == 1);
   CHECK(missing[0].find("unassigned block 3") != std::string::npos);

   Assignment out_of_range = ok;
   out_of_range.process_count = 4;
   out_of_range.owner[5] = 5;
   const auto bad_owner = validate_assignment(grid, out_of_range);
   REQUIRE(bad_owner.size() == 1);
   CHECK(bad_owner[0].find("owner out of range") != std::string::npos);

   Assignment short_map = ok;
   short_map.owner.resize(6);
   CHECK_FALSE(validate_assignment(grid, short_map).empty());
}

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "blockbal/grid.hpp"

namespace blockbal {

enum class CurveKind { Morton, Hilbert };

/// Z-order index on a 2^order cube: bit i of x lands at position 3i, y at
/// 3i+1, z at 3i+2. Bijective on [0, 2^(3*order)). Consecutive indices are
/// not necessarily adjacent cells (unlike Hilbert).
std::uint64_t morton_index(std::array<std::uint32_t, 3> coord, int order);

/// Hilbert index on a 2^order cube via the transpose/Gray-code construction.
/// Bijective, and consecutive indices map to face-adjacent cells.
std::uint64_t hilbert_index(std::array<std::uint32_t, 3> coord, int order);

/// Blocks of the grid ordered along the chosen curve. The grid is embedded
/// into the smallest enclosing 2^n cube; out-of-domain cells are dropped.
std::vector<BlockId> curve_order(const BlockGrid& grid, CurveKind kind);

const char* to_string(CurveKind kind);

}  // namespace blockbal

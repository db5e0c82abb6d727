#pragma once

#include <vector>

#include "sponge/ifs.hpp"

namespace sponge {

/// Symbolic delta-approximate cube. blocks[n-1] holds the level-n symbols
/// (representatives in I_n, i.e. map indices) at positions
/// L(sigma_{n+1})+1 .. L(sigma_n); slots[n-1] the same symbols as positions in I_n.
struct ApproximateCube {
  Permutation ordering;
  std::vector<int> stoppings;  // by coordinate
  std::vector<std::vector<int>> blocks;
  std::vector<std::vector<int>> slots;
  std::vector<double> log_sides;  // by coordinate

  int block_length(int n) const { return static_cast<int>(blocks.at(n - 1).size()); }
};

}  // namespace sponge

// Exact linear assignment via shortest augmenting paths with dual potentials,
// O(n^3). Deterministic: among equal-cost augmenting columns the lowest index
// wins, so identical inputs give identical permutations on every platform.
#pragma once

#include <vector>

#include "dcfw/tensor.hpp"

namespace dcfw {

struct Assignment {
  std::vector<int> row_to_col;
  double cost = 0.0;
};

// Minimizes sum_i cost(i, perm(i)) over permutations. cost must be square.
Assignment solve_lap(const Tensor& cost);

// Nearest permutation matrix to x in Frobenius distance, i.e. the assignment
// maximizing <x, P>; implemented as solve_lap(-x).
Assignment round_to_permutation(const Tensor& x);

Tensor permutation_matrix(const std::vector<int>& row_to_col);

}  // namespace dcfw

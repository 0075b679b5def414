#include "dcfw/lap.hpp"

#include <limits>
#include <stdexcept>

namespace dcfw {

// Shortest augmenting path with row/column potentials u, v. Rows are inserted
// one at a time; each insertion runs a Dijkstra-like scan over columns using
// reduced costs and augments along the cheapest path. Strict < comparisons
// keep the lowest column index on ties.
Assignment solve_lap(const Tensor& cost) {
  if (cost.rank() != 2 || cost.rows() != cost.cols()) {
    throw std::invalid_argument("solve_lap requires a square cost matrix");
  }
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();

  // 1-based helper arrays; column 0 is the virtual start of each augmentation.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0);  // match[j] = row assigned to column j
  std::vector<int> way(n + 1, 0);

  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = inf;
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost.at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }

  Assignment out;
  out.row_to_col.assign(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (match[j] > 0) out.row_to_col[match[j] - 1] = j - 1;
  }
  for (int i = 0; i < n; ++i) out.cost += cost.at(i, out.row_to_col[i]);
  return out;
}

Assignment round_to_permutation(const Tensor& x) {
  if (x.rank() != 2 || x.rows() != x.cols()) {
    throw std::invalid_argument("round_to_permutation requires a square matrix");
  }
  Tensor neg = -1.0 * x;
  Assignment a = solve_lap(neg);
  a.cost = -a.cost;  // report the maximized <x, P>
  return a;
}

Tensor permutation_matrix(const std::vector<int>& row_to_col) {
  const std::size_t n = row_to_col.size();
  Tensor p({n, n});
  std::vector<bool> used(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const int j = row_to_col[i];
    if (j < 0 || static_cast<std::size_t>(j) >= n) {
      throw std::invalid_argument("permutation index out of range");
    }
    if (used[static_cast<std::size_t>(j)]) {
      throw std::invalid_argument("permutation repeats column " + std::to_string(j));
    }
    used[static_cast<std::size_t>(j)] = true;
    p.at(i, static_cast<std::size_t>(j)) = 1.0;
  }
  return p;
}

}  // namespace dcfw

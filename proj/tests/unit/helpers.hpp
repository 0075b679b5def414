// Shared fixtures and independent reference implementations used as oracles
// across the unit suites. Everything here is deliberately written from the
// mathematical definition, not by calling back into the library under test.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dcfw/rng.hpp"
#include "dcfw/tensor.hpp"

namespace testing {

inline dcfw::Tensor rand_tensor(std::vector<std::size_t> shape, dcfw::SplitMix64& rng,
                                double scale = 1.0) {
  dcfw::Tensor t(std::move(shape));
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = scale * rng.next_gaussian();
  return t;
}

inline dcfw::Tensor rand_uniform_tensor(std::vector<std::size_t> shape, dcfw::SplitMix64& rng,
                                        double lo, double hi) {
  dcfw::Tensor t(std::move(shape));
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = lo + (hi - lo) * rng.next_double();
  return t;
}

// Central-difference gradient of a scalar field, entry by entry.
inline dcfw::Tensor finite_diff_gradient(const std::function<double(const dcfw::Tensor&)>& f,
                                         const dcfw::Tensor& x, double h = 1e-6) {
  dcfw::Tensor g = dcfw::Tensor::zeros_like(x);
  dcfw::Tensor probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = f(probe);
    probe[i] = x[i] - h;
    const double down = f(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

inline double max_abs_diff(const dcfw::Tensor& a, const dcfw::Tensor& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Dense minimization of a univariate function over [0,1] by exhaustive grid;
// used as the oracle for closed-form line searches.
inline double grid_minimize_unit(const std::function<double(double)>& q,
                                 std::size_t points = 100001) {
  double best_eta = 0.0;
  double best_val = q(0.0);
  for (std::size_t i = 1; i < points; ++i) {
    const double eta = static_cast<double>(i) / static_cast<double>(points - 1);
    const double val = q(eta);
    if (val < best_val) {
      best_val = val;
      best_eta = eta;
    }
  }
  return best_eta;
}

// Exhaustive linear assignment over all permutations; n <= 8.
inline double brute_force_lap_cost(const dcfw::Tensor& cost) {
  const std::size_t n = cost.rows();
  if (n > 8) throw std::invalid_argument("brute_force_lap_cost: n too large");
  std::vector<int> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<int>(i);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += cost.at(i, static_cast<std::size_t>(perm[i]));
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Simplex projection by bisection on the dual shift: proj(v)_i = max(v_i - t, 0)
// with the unique t making the entries sum to one.
inline dcfw::Tensor reference_simplex_projection(const dcfw::Tensor& v) {
  double lo = v[0], hi = v[0];
  for (std::size_t i = 0; i < v.size(); ++i) {
    lo = std::min(lo, v[i]);
    hi = std::max(hi, v[i]);
  }
  lo -= 1.0;
  const auto mass = [&](double t) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += std::max(v[i] - t, 0.0);
    return s;
  };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mass(mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double t = 0.5 * (lo + hi);
  dcfw::Tensor out = dcfw::Tensor::zeros_like(v);
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - t, 0.0);
  return out;
}

}  // namespace testing

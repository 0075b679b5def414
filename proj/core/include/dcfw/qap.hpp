// Quadratic assignment pipeline: QAPLIB-format parsing, doubly stochastic
// initialization, relax-and-round with either solver family, and the
// assignment-error metric.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dcfw/baselines.hpp"
#include "dcfw/lap.hpp"
#include "dcfw/solver.hpp"
#include "dcfw/tensor.hpp"

namespace dcfw {

struct QapInstance {
  std::size_t n = 0;
  Tensor a;
  Tensor b;
  std::optional<double> best_known;
};

// Whitespace-separated token format: n, then the n^2 entries of A row-major,
// then the n^2 entries of B. Blank lines and trailing whitespace are fine.
// Throws std::invalid_argument naming the offending token or the expected vs
// found token counts.
QapInstance parse_qaplib(const std::string& text);

std::string serialize_qaplib(const QapInstance& inst);

// ones/n plus i.i.d. standard Gaussian noise, pushed onto the Birkhoff
// polytope by `sweeps` alternating-projection rounds. Deterministic in seed;
// entries are exactly nonnegative, row/column sums accurate to the sweep
// limit.
Tensor qap_init_point(std::size_t n, std::uint64_t seed, std::size_t sweeps = 1000);

// Pairing cost sum_{ij} a_ij b_{perm(i) perm(j)}, the convention benchmark
// catalogs use for their best-known values. The relaxation objective at a
// permutation matrix equals the pairing cost with A transposed.
double qap_pairing_cost(const Tensor& a, const Tensor& b, const std::vector<int>& perm);

// Exact minimizer of the pairing cost by enumeration; guarded to n <= 9.
Assignment qap_brute_force(const Tensor& a, const Tensor& b);

// (phi_rounded - phi_best) / max(phi_best, 1).
double assignment_error(double phi_rounded, double phi_best);

enum class QapSolver { Fw, DcfwV1, DcfwV2, DcfwV3 };

struct QapRunConfig {
  std::uint64_t seed = 0;   // drives the initial point
  DcfwConfig dcfw;          // DcfwV* solvers
  BaselineConfig baseline;  // Fw solver
};

struct QapRunResult {
  Assignment assignment;     // rounding of the relaxed solution
  double phi_relaxed = 0.0;  // relaxation objective at the final iterate
  double phi_rounded = 0.0;  // relaxation objective at the rounded permutation
  DcfwResult solve;
};

// Solves the relaxed problem over the Birkhoff polytope from the seeded
// initial point, rounds to the nearest permutation (maximal <X, P>), and
// evaluates the objective at the rounded point.
QapRunResult relax_and_round(const QapInstance& inst, QapSolver solver, const QapRunConfig& cfg);

}  // namespace dcfw

// Constructors for the DC splits the solvers consume. Each spec fixes an
// f/g pair, its smoothness and curvature constants, and, where the surrogate
// is quadratic along segments, a closed-form exact line search.
#pragma once

#include <functional>
#include <variant>

#include "dcfw/problem.hpp"

namespace dcfw {

// Caller-supplied split, passed through unchanged.
struct DirectSpec {
  std::function<double(const Tensor&)> eval_f;
  std::function<Tensor(const Tensor&)> grad_f;
  std::function<double(const Tensor&)> eval_g;
  std::function<Tensor(const Tensor&)> subgrad_g;
  double smoothness_f = 0.0;
  double strong_convexity_f = 0.0;
  SetPtr set;
  std::function<double(const Tensor&, const Tensor&, const Tensor&)> exact_linesearch;
};

// f = (L/2)||x||^2, g = (L/2)||x||^2 - phi, for phi with L-Lipschitz gradient.
// The surrogate minimizer is the projected-gradient point.
struct PgmSpec {
  PhiOracles phi;
  double smoothness = 0.0;
  SetPtr set;
};

// f = phi + (L/2)||x||^2, g = (L/2)||x||^2; the outer loop becomes an inexact
// proximal point method. f is 2L-smooth.
struct PpmSpec {
  PhiOracles phi;
  double smoothness = 0.0;
  SetPtr set;
};

// f = (w/2)||x||^2, g = (w/2)||x||^2 - phi, for possibly nonsmooth phi whose
// negative is w-weakly convex. phi.gradient may return any subgradient.
struct WeaklyConvexPgmSpec {
  PhiOracles phi;
  double omega = 0.0;
  SetPtr set;
};

// phi = p - q with p w-smooth and q convex (possibly nonsmooth):
// f = (w/2)||x||^2, g = (w/2)||x||^2 - p + q.
struct CompositePgmSpec {
  PhiOracles p;
  std::function<double(const Tensor&)> q_value;
  std::function<Tensor(const Tensor&)> q_subgrad;
  double omega = 0.0;
  SetPtr set;
};

// phi = p - q as above but f = p + (w/2)||x||^2, g = (w/2)||x||^2 + q;
// an inexact proximal subgradient method. f is 2w-smooth.
struct CompositePpmSpec {
  PhiOracles p;
  std::function<double(const Tensor&)> q_value;
  std::function<Tensor(const Tensor&)> q_subgrad;
  double omega = 0.0;
  SetPtr set;
};

// Quadratic assignment relaxation phi(X) = <A^T X, X B> over the Birkhoff
// polytope. variant 1: f = ||A^T X + X B||^2/4, g = ||A^T X - X B||^2/4.
// variant 2: the Pgm split of phi. variant 3: the Ppm split. smoothness 0
// asks for the spectral estimate 2 ||A|| ||B||.
struct QapSpec {
  int variant = 1;
  Tensor a;
  Tensor b;
  double smoothness = 0.0;
};

using DecompositionSpec = std::variant<DirectSpec, PgmSpec, PpmSpec, WeaklyConvexPgmSpec,
                                       CompositePgmSpec, CompositePpmSpec, QapSpec>;

// Wires a DecompositionSpec into a validated DcProblem. Throws
// std::invalid_argument on nonpositive constants, missing oracles, or shape
// mismatches.
DcProblem build(const DecompositionSpec& spec);

// Value, gradient, and exact segment minimizer of phi(X) = <A^T X, X B>.
PhiOracles qap_objective(const Tensor& a, const Tensor& b);

// Closed-form exact line search for the QAP surrogates, clipped to [0, 1].
// Returns 0 when d = 0 and NaN when the 1-d quadratic degenerates (zero or
// negative curvature); callers then fall back to golden-section search.
double qap_linesearch(int variant, const Tensor& a, const Tensor& b, double L, const Tensor& x,
                      const Tensor& d, const Tensor& u);

// Largest singular value via power iteration on M^T M. Deterministic.
double spectral_norm(const Tensor& m, int iterations = 500);

}  // namespace dcfw

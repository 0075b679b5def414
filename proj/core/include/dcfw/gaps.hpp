// Stationarity certificates. The DC gap is the surrogate suboptimality at x
// and needs a subsolve in general; projected-gradient and proximal residuals
// are the cheap one-sided surrogates ordered below it.
#pragma once

#include <optional>
#include <vector>

#include "dcfw/problem.hpp"
#include "dcfw/sets.hpp"

namespace dcfw {

struct GapValue {
  double value = 0.0;    // certified lower estimate
  double bracket = 0.0;  // the true gap lies in [value, value + bracket]
};

struct ProxOptions {
  // Subsolve tolerance: tol_absolute when positive, otherwise
  // tol_factor * (1 + |phi(x)|).
  double tol_factor = 1e-8;
  double tol_absolute = 0.0;
  long long max_iterations = 100000000LL;
};

// max over the set of f(x) - f(y) - <u, x - y> with u = subgrad_g(x).
// Dispatches to the projection closed form for PgmSplit problems; otherwise
// runs the inner solver on the surrogate to suboptimality <= tol.
GapValue gap_dc(const DcProblem& p, const Tensor& x, double tol,
                OracleCounters* counters = nullptr, long long max_iterations = 100000000LL);

// Always takes the subsolve route, regardless of problem structure.
GapValue gap_dc_via_subproblem(const DcProblem& p, const Tensor& x, double tol,
                               OracleCounters* counters = nullptr,
                               long long max_iterations = 100000000LL);

// (L/2) || x - project(x - grad(x)/L) ||^2, exact up to the set's projection.
double gap_pgm(const PhiOracles& phi, const SetPtr& set, const Tensor& x, double L);
double gap_pgm(const DcProblem& p, const Tensor& x, double L = 0.0);  // 0: use smoothness_f

struct PpmGapResult {
  double value = 0.0;
  Tensor prox_point;
  double achieved_fw_gap = 0.0;  // certificate of the prox subsolve
};

// (L/2) || x - argmin_y phi(y) + (L/2)||y - x||^2 ||^2. The prox subproblem is
// solved by Frank-Wolfe started from the vertex minimizing the prox gradient
// at x, so stationary starting points do not self-certify. Requires
// phi + (L/2)||. - x||^2 convex on the set, i.e. L at least the smoothness of
// phi.
PpmGapResult gap_ppm(const PhiOracles& phi, const SetPtr& set, const Tensor& x, double L,
                     const ProxOptions& opt = {});
PpmGapResult gap_ppm(const DcProblem& p, const Tensor& x, double L = 0.0,
                     const ProxOptions& opt = {});

struct GapReport {
  double dc_value = 0.0;
  double dc_bracket = 0.0;
  std::optional<double> pgm;  // present for PgmSplit problems
  std::optional<double> ppm;  // present for PpmSplit problems
  double surrogate_fw_gap = 0.0;
};

GapReport compute_gap_report(const DcProblem& p, const Tensor& x, double tol,
                             const ProxOptions& prox = {});

struct GapGridRow {
  double x1 = 0.0, x2 = 0.0;
  double phi = 0.0;
  double gap_pgm = 0.0;
  double gap_ppm = 0.0;
};

// Evaluates phi and both residuals of a 2-d objective on a resolution^2 grid
// over [lo, hi]^2. Points are independent; work is spread over `threads`
// workers (0 picks the hardware count) with bit-identical results either way.
std::vector<GapGridRow> evaluate_gap_grid(const PhiOracles& phi, double L,
                                          std::size_t resolution, double lo, double hi,
                                          const ProxOptions& prox, int threads = 0);

}  // namespace dcfw

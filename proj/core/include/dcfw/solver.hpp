// Outer loop: freeze a subgradient of g once per iteration, minimize the
// convex surrogate f - <u_t, .> with the inner Frank-Wolfe solver to half the
// current tolerance, repeat. Tolerances either stay fixed or shrink
// geometrically whenever the measured surrogate gap crosses them.
#pragma once

#include <cstdint>
#include <functional>

#include "dcfw/fw.hpp"
#include "dcfw/problem.hpp"

namespace dcfw {

struct ToleranceRule {
  enum class Kind { Fixed, Adaptive };
  Kind kind = Kind::Adaptive;
  double eps_fixed = 1e-3;  // Fixed: inner tolerance used every outer iteration
  double beta = 0.8;        // Adaptive: shrink factor in (0, 1)

  static ToleranceRule fixed(double eps);
  static ToleranceRule adaptive(double beta = 0.8);
};

enum class TerminationReason { GapReached, MaxOuter, MaxInner };

struct DcfwConfig {
  ToleranceRule tolerance;
  // Stop when the measured surrogate gap at the current iterate falls to
  // eps_final (absolute) or rel_stop_factor * eps0 (relative; 0 disables).
  // eps0 is the measured gap at the initial point.
  double eps_final = 1e-9;
  double rel_stop_factor = 1e-3;
  int max_outer = 500;
  long long max_inner = 100000000LL;
  StepRule rule = StepRule::exact_linesearch();
  std::uint64_t seed = 0;  // recorded for provenance; the solve itself is deterministic
  // Called once per outer iteration with (t, x_t, measured gap at x_t).
  std::function<void(int t, const Tensor& x, double gap)> observer;
};

struct DcfwResult {
  Tensor x_final;
  SolveTrace trace;
  TerminationReason terminated_by = TerminationReason::MaxOuter;
  double eps0 = 0.0;
  OracleCounters counters;
  long long linesearch_fallbacks = 0;
};

DcfwResult dcfw_solve(const DcProblem& p, const Tensor& x0, const DcfwConfig& cfg);

// True iff consecutive trace rows never increase phi by more than eps / 2.
bool descent_certificate(const SolveTrace& trace, double eps);

// Surrogate for the frozen subgradient u: gradient grad_f - u, value
// f - <u, .>, closed-form line search bound to u when the problem has one.
SurrogateProblem make_surrogate(const CountedProblem& cp, const Tensor& u);

}  // namespace dcfw

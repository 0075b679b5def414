// Comparison solvers: classical Frank-Wolfe on a smooth objective, and the
// subgradient-difference variant that refreshes u in every iteration instead
// of once per outer loop.
#pragma once

#include <functional>

#include "dcfw/problem.hpp"
#include "dcfw/solver.hpp"

namespace dcfw {

struct BaselineConfig {
  long long max_steps = 1000;  // one LMO per step
  StepRule rule = StepRule::exact_linesearch();
  // Stop when the measured gap falls to eps_final (absolute) or
  // rel_stop_factor times the first measured gap (0 disables).
  double eps_final = 1e-9;
  double rel_stop_factor = 1e-3;
  // Smoothness used by the Demyanov-Rubinov rule when the rule itself has no
  // override; ignored by the other rules.
  double smoothness = 0.0;
  std::function<void(long long k, const Tensor& x, double gap)> observer;
};

// Plain Frank-Wolfe on phi: s_k = lmo(grad phi(x_k)), step by cfg.rule. The
// trace records the standard FW gap <grad phi(x_k), x_k - s_k> per step; no
// subgradient oracle is consulted.
DcfwResult fw_nonconvex(const PhiOracles& phi, const SetPtr& set, const Tensor& x0,
                        const BaselineConfig& cfg);

// Frank-Wolfe with direction grad_f(x_k) - u_k, u_k resampled from subgrad_g
// at every iteration; subgrad_g_calls therefore equals the step count. With
// g identically zero the iterates coincide with fw_nonconvex.
DcfwResult fw_k(const DcProblem& p, const Tensor& x0, const BaselineConfig& cfg);

}  // namespace dcfw

// Inner Frank-Wolfe loop on a convex surrogate. The duality gap is checked
// before stepping, so a satisfied tolerance returns the pre-step iterate and
// the reported gap certifies that exact point.
#pragma once

#include <functional>

#include "dcfw/problem.hpp"
#include "dcfw/sets.hpp"
#include "dcfw/tensor.hpp"

namespace dcfw {

enum class StepKind { Harmonic, ExactLineSearch, DemyanovRubinov };

struct StepRule {
  StepKind kind = StepKind::ExactLineSearch;
  // Demyanov-Rubinov smoothness constant; 0 means use the surrogate's own.
  double smoothness_override = 0.0;

  static StepRule harmonic() { return {StepKind::Harmonic, 0.0}; }
  static StepRule exact_linesearch() { return {StepKind::ExactLineSearch, 0.0}; }
  static StepRule demyanov_rubinov(double L = 0.0) { return {StepKind::DemyanovRubinov, L}; }
};

struct SurrogateProblem {
  std::function<Tensor(const Tensor&)> gradient;
  // Optional; required for golden-section line search and for value-based
  // gap certificates.
  std::function<double(const Tensor&)> value;
  // Optional closed-form line search along x + eta d; NaN triggers the
  // golden-section fallback.
  std::function<double(const Tensor& x, const Tensor& d)> line_search;
  SetPtr set;
  double smoothness = 0.0;
};

struct FwOptions {
  double eps_half = 1e-8;              // stop when the FW gap is <= eps_half; must be > 0
  long long max_inner = 100000000LL;   // iteration budget
  StepRule rule = StepRule::exact_linesearch();
  OracleCounters* counters = nullptr;  // lmo_calls tracked when provided
  long long* linesearch_fallbacks = nullptr;  // incremented when closed form degenerates
  // Called once per iteration with (k, x_k, gap at x_k) before the step.
  std::function<void(long long k, const Tensor& x, double gap)> observer;
};

struct FwResult {
  Tensor x;
  long long iterations = 0;  // LMO calls performed
  double last_gap = 0.0;     // gap at the returned iterate when gap_reached
  bool gap_reached = false;
};

FwResult fw_solve(const SurrogateProblem& s, const Tensor& x0, const FwOptions& opt);

// eta_k = 2 / (k + 1) with k starting at 1, so the first step is a full step.
double step_harmonic(long long k);

// min{ <grad, x - s> / (L ||x - s||^2), 1 }, clamped to [0, 1].
double step_demyanov_rubinov(const Tensor& grad, const Tensor& x, const Tensor& s, double L);

// Closed form when the surrogate registers one, golden-section on the value
// oracle otherwise. Result clamped to [0, 1].
double step_exact_linesearch(const SurrogateProblem& s, const Tensor& x, const Tensor& d,
                             long long* fallback_count = nullptr);

// Golden-section minimization of q over [lo, hi] to the given interval width.
// Assumes q is unimodal on the interval.
double golden_section_minimize(const std::function<double(double)>& q, double lo, double hi,
                               double tol = 1e-10);

}  // namespace dcfw

// Problem bundles and bookkeeping shared by every solver. A DcProblem is an
// immutable value describing phi = f - g through its oracles; counters are
// per-solve and are incremented only inside CountedProblem, never by solver
// call sites, so oracle complexity claims are tamper-proof by construction.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dcfw/sets.hpp"
#include "dcfw/tensor.hpp"

namespace dcfw {

// Structural tag for decompositions whose stationarity gap has a closed form.
// PgmSplit: f = L/2 ||x||^2. PpmSplit: f = phi + L/2 ||x||^2, g = L/2 ||x||^2.
enum class DcStructure { General, PgmSplit, PpmSplit };

struct DcProblem {
  std::function<double(const Tensor&)> eval_f;
  std::function<Tensor(const Tensor&)> grad_f;
  std::function<double(const Tensor&)> eval_g;
  std::function<Tensor(const Tensor&)> subgrad_g;
  double smoothness_f = 0.0;        // Lipschitz constant of grad_f, > 0
  double strong_convexity_f = 0.0;  // modulus of f, >= 0
  SetPtr set;
  // Optional exact minimizer of the surrogate along x + eta (d) for eta in
  // [0, 1], given the frozen subgradient u. May return NaN when degenerate;
  // the inner solver then falls back to golden-section search.
  std::function<double(const Tensor& x, const Tensor& d, const Tensor& u)> exact_linesearch;
  DcStructure structure = DcStructure::General;

  // Throws std::invalid_argument on missing oracles or nonpositive smoothness.
  void validate() const;
};

// Objective phi(x) = f(x) - g(x); throws when x violates the feasible set,
// naming the violated constraint.
double phi(const DcProblem& p, const Tensor& x);

struct OracleCounters {
  long long eval_calls = 0;        // eval_f + eval_g invocations
  long long grad_f_calls = 0;
  long long subgrad_g_calls = 0;
  long long lmo_calls = 0;
  long long projection_calls = 0;
};

// View over a DcProblem that increments counters on every oracle call.
class CountedProblem {
 public:
  CountedProblem(const DcProblem& p, OracleCounters& c) : p_(&p), c_(&c) {}

  double eval_f(const Tensor& x) const {
    ++c_->eval_calls;
    return p_->eval_f(x);
  }
  double eval_g(const Tensor& x) const {
    ++c_->eval_calls;
    return p_->eval_g(x);
  }
  Tensor grad_f(const Tensor& x) const {
    ++c_->grad_f_calls;
    return p_->grad_f(x);
  }
  Tensor subgrad_g(const Tensor& x) const {
    ++c_->subgrad_g_calls;
    return p_->subgrad_g(x);
  }
  double phi_value(const Tensor& x) const { return eval_f(x) - eval_g(x); }
  LmoResult lmo(const Tensor& direction) const {
    ++c_->lmo_calls;
    return p_->set->linear_minimize(direction);
  }
  Tensor project(const Tensor& point) const {
    ++c_->projection_calls;
    return p_->set->project(point);
  }

  const DcProblem& problem() const { return *p_; }
  OracleCounters& counters() const { return *c_; }

 private:
  const DcProblem* p_;
  OracleCounters* c_;
};

struct TraceRow {
  int outer_iter = 0;
  long long inner_iterations = 0;
  double phi_value = 0.0;
  double surrogate_fw_gap = 0.0;
  OracleCounters counters;  // cumulative snapshot at the end of the iteration
  double elapsed_seconds = 0.0;
  bool inner_budget_exhausted = false;
};

// Append-only log, one row per outer iteration. Appends enforce increasing
// iteration indices, nondecreasing counters, and nondecreasing elapsed time.
struct SolveTrace {
  std::vector<TraceRow> rows;
  void append(TraceRow row);
};

// Smooth objective described by value/gradient oracles, used by the smooth
// decompositions and the plain Frank-Wolfe baseline.
struct PhiOracles {
  std::function<double(const Tensor&)> value;
  std::function<Tensor(const Tensor&)> gradient;
  // Optional exact minimizer of value along x + eta d over eta in [0, 1].
  std::function<double(const Tensor& x, const Tensor& d)> segment_minimizer;
};

}  // namespace dcfw

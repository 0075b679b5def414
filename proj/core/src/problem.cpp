#include "dcfw/problem.hpp"

#include <stdexcept>

namespace dcfw {

void DcProblem::validate() const {
  if (!eval_f || !grad_f || !eval_g || !subgrad_g) {
    throw std::invalid_argument("DcProblem requires eval_f, grad_f, eval_g, subgrad_g");
  }
  if (!set) throw std::invalid_argument("DcProblem requires a feasible set");
  if (!(smoothness_f > 0.0)) {
    throw std::invalid_argument("DcProblem smoothness_f must be positive");
  }
  if (strong_convexity_f < 0.0) {
    throw std::invalid_argument("DcProblem strong_convexity_f must be nonnegative");
  }
}

double phi(const DcProblem& p, const Tensor& x) {
  const std::string violation = p.set->membership_violation(x, 1e-9);
  if (!violation.empty()) {
    throw std::invalid_argument("phi evaluated at infeasible point: " + violation);
  }
  return p.eval_f(x) - p.eval_g(x);
}

void SolveTrace::append(TraceRow row) {
  if (!rows.empty()) {
    const TraceRow& prev = rows.back();
    if (row.outer_iter <= prev.outer_iter) {
      throw std::logic_error("trace outer_iter must be strictly increasing");
    }
    if (row.elapsed_seconds < prev.elapsed_seconds) {
      throw std::logic_error("trace elapsed_seconds must be nondecreasing");
    }
    const bool counters_ok = row.counters.eval_calls >= prev.counters.eval_calls &&
                             row.counters.grad_f_calls >= prev.counters.grad_f_calls &&
                             row.counters.subgrad_g_calls >= prev.counters.subgrad_g_calls &&
                             row.counters.lmo_calls >= prev.counters.lmo_calls &&
                             row.counters.projection_calls >= prev.counters.projection_calls;
    if (!counters_ok) throw std::logic_error("trace counters must be nondecreasing");
  }
  rows.push_back(std::move(row));
}

}  // namespace dcfw

#include "dcfw/solver.hpp"

#include <chrono>
#include <stdexcept>

namespace dcfw {

ToleranceRule ToleranceRule::fixed(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("fixed tolerance must be positive");
  ToleranceRule r;
  r.kind = Kind::Fixed;
  r.eps_fixed = eps;
  return r;
}

ToleranceRule ToleranceRule::adaptive(double beta) {
  if (!(beta > 0.0) || !(beta < 1.0)) {
    throw std::invalid_argument("adaptive tolerance requires beta in (0, 1)");
  }
  ToleranceRule r;
  r.kind = Kind::Adaptive;
  r.beta = beta;
  return r;
}

SurrogateProblem make_surrogate(const CountedProblem& cp, const Tensor& u) {
  SurrogateProblem s;
  s.gradient = [cp, u](const Tensor& x) {
    Tensor g = cp.grad_f(x);
    g.add_scaled(u, -1.0);
    return g;
  };
  s.value = [cp, u](const Tensor& x) { return cp.eval_f(x) - inner_product(u, x); };
  const DcProblem& p = cp.problem();
  if (p.exact_linesearch) {
    const auto ls = p.exact_linesearch;
    s.line_search = [ls, u](const Tensor& x, const Tensor& d) { return ls(x, d, u); };
  }
  s.set = p.set;
  s.smoothness = p.smoothness_f;
  return s;
}

DcfwResult dcfw_solve(const DcProblem& p, const Tensor& x0, const DcfwConfig& cfg) {
  p.validate();
  if (!(cfg.eps_final > 0.0)) throw std::invalid_argument("eps_final must be positive");
  if (cfg.rel_stop_factor < 0.0) {
    throw std::invalid_argument("rel_stop_factor must be nonnegative");
  }
  if (cfg.max_outer < 1) throw std::invalid_argument("max_outer must be >= 1");
  if (cfg.tolerance.kind == ToleranceRule::Kind::Fixed && !(cfg.tolerance.eps_fixed > 0.0)) {
    throw std::invalid_argument("fixed tolerance must be positive");
  }
  if (cfg.tolerance.kind == ToleranceRule::Kind::Adaptive &&
      (!(cfg.tolerance.beta > 0.0) || !(cfg.tolerance.beta < 1.0))) {
    throw std::invalid_argument("adaptive tolerance requires beta in (0, 1)");
  }
  {
    const std::string violation = p.set->membership_violation(x0, 1e-9);
    if (!violation.empty()) {
      throw std::invalid_argument("dcfw_solve initial point infeasible: " + violation);
    }
  }

  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&start]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  DcfwResult out;
  OracleCounters counters;
  CountedProblem cp(p, counters);

  Tensor x = x0;
  double current_eps = 0.0;
  bool last_inner_exhausted = false;
  out.terminated_by = TerminationReason::MaxOuter;

  for (int t = 0; t < cfg.max_outer; ++t) {
    const Tensor u = cp.subgrad_g(x);
    const SurrogateProblem surrogate = make_surrogate(cp, u);

    // Measured surrogate gap at x_t; costs one gradient and one LMO.
    Tensor grad0 = cp.grad_f(x);
    grad0.add_scaled(u, -1.0);
    const LmoResult ref = cp.lmo(grad0);
    const double measured_gap = inner_product(grad0, x) - ref.objective_value;

    if (cfg.observer) cfg.observer(t, x, measured_gap);
    if (t == 0) out.eps0 = measured_gap;

    const double phi_t = cp.phi_value(x);
    const bool stop_abs = measured_gap <= cfg.eps_final;
    const bool stop_rel =
        cfg.rel_stop_factor > 0.0 && measured_gap <= cfg.rel_stop_factor * out.eps0;
    if (stop_abs || stop_rel) {
      TraceRow row;
      row.outer_iter = t;
      row.inner_iterations = 0;
      row.phi_value = phi_t;
      row.surrogate_fw_gap = measured_gap;
      row.counters = counters;
      row.elapsed_seconds = elapsed();
      out.trace.append(std::move(row));
      out.terminated_by = TerminationReason::GapReached;
      out.x_final = std::move(x);
      out.counters = counters;
      return out;
    }

    if (cfg.tolerance.kind == ToleranceRule::Kind::Fixed) {
      current_eps = cfg.tolerance.eps_fixed;
    } else if (t == 0) {
      current_eps = cfg.tolerance.beta * out.eps0;
    } else if (measured_gap < current_eps) {
      current_eps *= cfg.tolerance.beta;
    }

    FwOptions fw_opt;
    fw_opt.eps_half = current_eps / 2.0;
    fw_opt.max_inner = cfg.max_inner;
    fw_opt.rule = cfg.rule;
    fw_opt.counters = &counters;
    fw_opt.linesearch_fallbacks = &out.linesearch_fallbacks;
    FwResult inner = fw_solve(surrogate, x, fw_opt);
    last_inner_exhausted = !inner.gap_reached;
    x = std::move(inner.x);

    TraceRow row;
    row.outer_iter = t;
    row.inner_iterations = inner.iterations;
    row.phi_value = phi_t;
    row.surrogate_fw_gap = measured_gap;
    row.counters = counters;
    row.elapsed_seconds = elapsed();
    row.inner_budget_exhausted = last_inner_exhausted;
    out.trace.append(std::move(row));
  }

  out.terminated_by =
      last_inner_exhausted ? TerminationReason::MaxInner : TerminationReason::MaxOuter;
  out.x_final = std::move(x);
  out.counters = counters;
  return out;
}

bool descent_certificate(const SolveTrace& trace, double eps) {
  if (!(eps >= 0.0)) throw std::invalid_argument("descent certificate requires eps >= 0");
  for (std::size_t i = 1; i < trace.rows.size(); ++i) {
    if (trace.rows[i].phi_value > trace.rows[i - 1].phi_value + eps / 2.0) return false;
  }
  return true;
}

}  // namespace dcfw

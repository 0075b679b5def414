#include "dcfw/baselines.hpp"

#include <chrono>
#include <stdexcept>

namespace dcfw {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void require_feasible(const SetPtr& set, const Tensor& x0, const char* who) {
  if (set == nullptr) throw std::invalid_argument(std::string(who) + ": set is required");
  const std::string violation = set->membership_violation(x0, 1e-9);
  if (!violation.empty()) {
    throw std::invalid_argument(std::string(who) + ": infeasible start: " + violation);
  }
}

struct StepContext {
  const BaselineConfig* cfg;
  const SurrogateProblem* surrogate;
  long long* fallbacks;
};

double take_step(const StepContext& ctx, long long k, const Tensor& grad, const Tensor& x,
                 const Tensor& vertex, const Tensor& d) {
  switch (ctx.cfg->rule.kind) {
    case StepKind::Harmonic:
      return step_harmonic(k + 1);
    case StepKind::DemyanovRubinov: {
      const double L = ctx.cfg->rule.smoothness_override > 0.0 ? ctx.cfg->rule.smoothness_override
                                                               : ctx.cfg->smoothness;
      return step_demyanov_rubinov(grad, x, vertex, L);
    }
    case StepKind::ExactLineSearch:
      return step_exact_linesearch(*ctx.surrogate, x, d, ctx.fallbacks);
  }
  throw std::logic_error("unhandled step rule");
}

}  // namespace

DcfwResult fw_nonconvex(const PhiOracles& phi, const SetPtr& set, const Tensor& x0,
                        const BaselineConfig& cfg) {
  if (!phi.value || !phi.gradient) {
    throw std::invalid_argument("fw_nonconvex: phi value and gradient oracles are required");
  }
  require_feasible(set, x0, "fw_nonconvex");
  if (cfg.max_steps < 1) throw std::invalid_argument("fw_nonconvex: max_steps must be >= 1");

  // Wrapped as a DC problem with g = 0 so oracle counting stays inside the
  // counted view; the g oracles are never invoked here.
  DcProblem wrapper;
  wrapper.eval_f = phi.value;
  wrapper.grad_f = phi.gradient;
  wrapper.eval_g = [](const Tensor&) { return 0.0; };
  wrapper.subgrad_g = [](const Tensor& x) { return Tensor::zeros_like(x); };
  wrapper.smoothness_f = cfg.smoothness > 0.0 ? cfg.smoothness : 1.0;
  wrapper.set = set;

  DcfwResult result;
  CountedProblem cp(wrapper, result.counters);

  SurrogateProblem segment;
  segment.value = [&cp](const Tensor& y) { return cp.eval_f(y); };
  if (phi.segment_minimizer) {
    const auto sm = phi.segment_minimizer;
    segment.line_search = [sm](const Tensor& x, const Tensor& d) { return sm(x, d); };
  }
  segment.set = set;
  segment.smoothness = cfg.smoothness;

  const StepContext ctx{&cfg, &segment, &result.linesearch_fallbacks};
  const auto t0 = Clock::now();
  Tensor x = x0;
  result.terminated_by = TerminationReason::MaxOuter;

  for (long long k = 0; k < cfg.max_steps; ++k) {
    const Tensor grad = cp.grad_f(x);
    const LmoResult lm = cp.lmo(grad);
    const double gap = inner_product(grad, x) - lm.objective_value;
    if (k == 0) result.eps0 = gap;
    if (cfg.observer) cfg.observer(k, x, gap);

    const bool stop = gap <= cfg.eps_final ||
                      (cfg.rel_stop_factor > 0.0 && gap <= cfg.rel_stop_factor * result.eps0);
    TraceRow row;
    row.outer_iter = static_cast<int>(k);
    row.phi_value = cp.eval_f(x);
    row.surrogate_fw_gap = gap;
    row.elapsed_seconds = seconds_since(t0);

    if (stop) {
      row.inner_iterations = 0;
      row.counters = result.counters;
      result.trace.append(row);
      result.terminated_by = TerminationReason::GapReached;
      break;
    }

    const Tensor d = lm.vertex - x;
    const double eta = take_step(ctx, k, grad, x, lm.vertex, d);
    x.add_scaled(d, eta);
    row.inner_iterations = 1;
    row.counters = result.counters;  // includes any line-search evaluations
    result.trace.append(row);
  }

  result.x_final = x;
  return result;
}

DcfwResult fw_k(const DcProblem& p, const Tensor& x0, const BaselineConfig& cfg) {
  p.validate();
  require_feasible(p.set, x0, "fw_k");
  if (cfg.max_steps < 1) throw std::invalid_argument("fw_k: max_steps must be >= 1");

  BaselineConfig local = cfg;
  if (local.smoothness <= 0.0) local.smoothness = p.smoothness_f;

  DcfwResult result;
  CountedProblem cp(p, result.counters);
  const auto t0 = Clock::now();
  Tensor x = x0;
  result.terminated_by = TerminationReason::MaxOuter;

  for (long long k = 0; k < cfg.max_steps; ++k) {
    const Tensor u = cp.subgrad_g(x);  // refreshed every step by design
    Tensor grad = cp.grad_f(x);
    grad.add_scaled(u, -1.0);
    const LmoResult lm = cp.lmo(grad);
    const double gap = inner_product(grad, x) - lm.objective_value;
    if (k == 0) result.eps0 = gap;
    if (cfg.observer) cfg.observer(k, x, gap);

    const bool stop = gap <= cfg.eps_final ||
                      (cfg.rel_stop_factor > 0.0 && gap <= cfg.rel_stop_factor * result.eps0);
    TraceRow row;
    row.outer_iter = static_cast<int>(k);
    row.phi_value = cp.phi_value(x);
    row.surrogate_fw_gap = gap;
    row.elapsed_seconds = seconds_since(t0);

    if (stop) {
      row.inner_iterations = 0;
      row.counters = result.counters;
      result.trace.append(row);
      result.terminated_by = TerminationReason::GapReached;
      break;
    }

    const SurrogateProblem surrogate = make_surrogate(cp, u);
    const StepContext ctx{&local, &surrogate, &result.linesearch_fallbacks};
    const Tensor d = lm.vertex - x;
    const double eta = take_step(ctx, k, grad, x, lm.vertex, d);
    x.add_scaled(d, eta);
    row.inner_iterations = 1;
    row.counters = result.counters;
    result.trace.append(row);
  }

  result.x_final = x;
  return result;
}

}  // namespace dcfw

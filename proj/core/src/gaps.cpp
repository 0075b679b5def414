#include "dcfw/gaps.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>
#include <utility>

#include "dcfw/fw.hpp"
#include "dcfw/solver.hpp"

namespace dcfw {

namespace {

// Projection residual closed form: with x* = project(x - grad/L), the value
// <grad, x - x*> - (L/2)||x* - x||^2 equals the exact DC gap of the
// projected-gradient decomposition. Nonnegativity follows from the projection
// variational inequality; tiny negatives are roundoff.
GapValue gap_dc_pgm_closed_form(const CountedProblem& cp, const Tensor& x) {
  const double L = cp.problem().smoothness_f;
  Tensor grad_phi = cp.grad_f(x) - cp.subgrad_g(x);
  Tensor target = x;
  target.add_scaled(grad_phi, -1.0 / L);
  const Tensor xs = cp.project(target);
  const Tensor diff = x - xs;
  const double value = inner_product(grad_phi, diff) - 0.5 * L * norm2_squared(diff);
  return {std::max(value, 0.0), 0.0};
}

}  // namespace

GapValue gap_dc_via_subproblem(const DcProblem& p, const Tensor& x, double tol,
                               OracleCounters* counters, long long max_iterations) {
  if (!(tol > 0.0)) throw std::invalid_argument("gap_dc: tol must be positive");
  OracleCounters scratch;
  CountedProblem cp(p, counters != nullptr ? *counters : scratch);
  const Tensor u = cp.subgrad_g(x);
  const SurrogateProblem s = make_surrogate(cp, u);
  const double psi_x = s.value(x);

  FwOptions opt;
  opt.eps_half = tol;  // FW gap <= tol certifies surrogate suboptimality <= tol
  opt.max_inner = max_iterations;
  // A closed-form line search is exact and keeps the fast route. Without one,
  // golden-section steps bottom out near eta ~ 1e-10 and the measured gap
  // floors around L * D^2 * 1e-10; Demyanov-Rubinov steps are computed from
  // the gradient directly, so deep certificates stay reachable.
  opt.rule = s.line_search ? StepRule::exact_linesearch() : StepRule::demyanov_rubinov();
  opt.counters = &cp.counters();
  const FwResult res = fw_solve(s, x, opt);

  GapValue out;
  out.value = std::max(psi_x - s.value(res.x), 0.0);
  out.bracket = res.last_gap;
  return out;
}

GapValue gap_dc(const DcProblem& p, const Tensor& x, double tol, OracleCounters* counters,
                long long max_iterations) {
  if (p.structure == DcStructure::PgmSplit) {
    OracleCounters scratch;
    CountedProblem cp(p, counters != nullptr ? *counters : scratch);
    return gap_dc_pgm_closed_form(cp, x);
  }
  return gap_dc_via_subproblem(p, x, tol, counters, max_iterations);
}

double gap_pgm(const PhiOracles& phi, const SetPtr& set, const Tensor& x, double L) {
  if (!(L > 0.0)) throw std::invalid_argument("gap_pgm: L must be positive");
  if (set == nullptr) throw std::invalid_argument("gap_pgm: set is required");
  Tensor target = x;
  target.add_scaled(phi.gradient(x), -1.0 / L);
  const Tensor xs = set->project(target);
  return 0.5 * L * norm2_squared(x - xs);
}

double gap_pgm(const DcProblem& p, const Tensor& x, double L) {
  PhiOracles phi;
  phi.gradient = [&p](const Tensor& y) { return p.grad_f(y) - p.subgrad_g(y); };
  phi.value = [&p](const Tensor& y) { return p.eval_f(y) - p.eval_g(y); };
  return gap_pgm(phi, p.set, x, L > 0.0 ? L : p.smoothness_f);
}

PpmGapResult gap_ppm(const PhiOracles& phi, const SetPtr& set, const Tensor& x, double L,
                     const ProxOptions& opt) {
  if (!(L > 0.0)) throw std::invalid_argument("gap_ppm: L must be positive");
  if (set == nullptr) throw std::invalid_argument("gap_ppm: set is required");
  if (!(opt.tol_factor > 0.0) && !(opt.tol_absolute > 0.0)) {
    throw std::invalid_argument("gap_ppm: subsolve tolerance must be positive");
  }

  const double tol =
      opt.tol_absolute > 0.0 ? opt.tol_absolute : opt.tol_factor * (1.0 + std::abs(phi.value(x)));

  SurrogateProblem prox;
  prox.gradient = [&phi, &x, L](const Tensor& y) {
    Tensor g = phi.gradient(y);
    g.add_scaled(y, L);
    g.add_scaled(x, -L);
    return g;
  };
  prox.value = [&phi, &x, L](const Tensor& y) {
    return phi.value(y) + 0.5 * L * norm2_squared(y - x);
  };
  prox.set = set;
  prox.smoothness = 2.0 * L;

  // Start from the vertex minimizing the prox gradient at x rather than from
  // x itself: a stationary x would otherwise certify its own residual as zero.
  const Tensor s0 = set->linear_minimize(prox.gradient(x)).vertex;

  FwOptions fopt;
  fopt.eps_half = tol;
  fopt.max_inner = opt.max_iterations;
  fopt.rule = StepRule::demyanov_rubinov();  // no eval floor, see gap_dc_via_subproblem
  const FwResult res = fw_solve(prox, s0, fopt);

  PpmGapResult out;
  out.value = 0.5 * L * norm2_squared(x - res.x);
  out.prox_point = res.x;
  out.achieved_fw_gap = res.last_gap;
  return out;
}

PpmGapResult gap_ppm(const DcProblem& p, const Tensor& x, double L, const ProxOptions& opt) {
  PhiOracles phi;
  phi.gradient = [&p](const Tensor& y) { return p.grad_f(y) - p.subgrad_g(y); };
  phi.value = [&p](const Tensor& y) { return p.eval_f(y) - p.eval_g(y); };
  return gap_ppm(phi, p.set, x, L > 0.0 ? L : p.smoothness_f, opt);
}

GapReport compute_gap_report(const DcProblem& p, const Tensor& x, double tol,
                             const ProxOptions& prox) {
  GapReport r;
  const GapValue dc = gap_dc(p, x, tol);
  r.dc_value = dc.value;
  r.dc_bracket = dc.bracket;
  if (p.structure == DcStructure::PgmSplit) {
    r.pgm = gap_pgm(p, x);
  } else if (p.structure == DcStructure::PpmSplit) {
    r.ppm = gap_ppm(p, x, 0.0, prox).value;
  }
  const Tensor u = p.subgrad_g(x);
  const Tensor grad = p.grad_f(x) - u;
  const LmoResult lmo = p.set->linear_minimize(grad);
  r.surrogate_fw_gap = inner_product(grad, x) - lmo.objective_value;
  return r;
}

std::vector<GapGridRow> evaluate_gap_grid(const PhiOracles& phi, double L,
                                          std::size_t resolution, double lo, double hi,
                                          const ProxOptions& prox, int threads) {
  if (resolution < 2) throw std::invalid_argument("evaluate_gap_grid: resolution must be >= 2");
  if (!(lo < hi)) throw std::invalid_argument("evaluate_gap_grid: requires lo < hi");

  const double mid = 0.5 * (lo + hi);
  const SetPtr set = make_box_linf(Tensor::from_vector({mid, mid}), 0.5 * (hi - lo));
  const std::size_t total = resolution * resolution;
  std::vector<GapGridRow> rows(total);

  const auto coord = [&](std::size_t i) {
    return lo + (hi - lo) * (static_cast<double>(i) / static_cast<double>(resolution - 1));
  };
  const auto evaluate_point = [&](std::size_t idx) {
    const std::size_t i = idx / resolution;
    const std::size_t j = idx % resolution;
    GapGridRow& row = rows[idx];
    row.x1 = coord(i);
    row.x2 = coord(j);
    const Tensor x = Tensor::from_vector({row.x1, row.x2});
    row.phi = phi.value(x);
    row.gap_pgm = gap_pgm(phi, set, x, L);
    row.gap_ppm = gap_ppm(phi, set, x, L, prox).value;
  };

  unsigned workers = threads > 0 ? static_cast<unsigned>(threads)
                                 : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));

  if (workers <= 1) {
    for (std::size_t idx = 0; idx < total; ++idx) evaluate_point(idx);
    return rows;
  }

  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (std::size_t idx = w; idx < total; idx += workers) evaluate_point(idx);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return rows;
}

}  // namespace dcfw

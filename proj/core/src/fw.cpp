#include "dcfw/fw.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dcfw {

double step_harmonic(long long k) {
  if (k < 1) throw std::invalid_argument("harmonic step index starts at 1");
  return 2.0 / static_cast<double>(k + 1);
}

double step_demyanov_rubinov(const Tensor& grad, const Tensor& x, const Tensor& s, double L) {
  if (!(L > 0.0)) throw std::invalid_argument("Demyanov-Rubinov step requires L > 0");
  const Tensor d = s - x;
  const double denom = L * norm2_squared(d);
  if (denom == 0.0) return 0.0;
  const double gap = -inner_product(grad, d);
  if (gap <= 0.0) return 0.0;
  return std::min(gap / denom, 1.0);
}

double golden_section_minimize(const std::function<double(double)>& q, double lo, double hi,
                               double tol) {
  const double invphi = 0.6180339887498948482;  // 1/phi
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double qc = q(c), qd = q(d);
  while (b - a > tol) {
    if (qc < qd) {
      b = d;
      d = c;
      qd = qc;
      c = b - invphi * (b - a);
      qc = q(c);
    } else {
      a = c;
      c = d;
      qc = qd;
      d = a + invphi * (b - a);
      qd = q(d);
    }
  }
  return 0.5 * (a + b);
}

double step_exact_linesearch(const SurrogateProblem& s, const Tensor& x, const Tensor& d,
                             long long* fallback_count) {
  if (s.line_search) {
    const double eta = s.line_search(x, d);
    if (std::isfinite(eta)) return std::clamp(eta, 0.0, 1.0);
    if (fallback_count) ++*fallback_count;
    // fall through to golden-section on a degenerate closed form
  }
  if (!s.value) {
    throw std::invalid_argument(
        "exact line search requires a closed form or a surrogate value oracle");
  }
  const auto q = [&](double eta) {
    Tensor y = x;
    y.add_scaled(d, eta);
    return s.value(y);
  };
  return golden_section_minimize(q, 0.0, 1.0, 1e-10);
}

FwResult fw_solve(const SurrogateProblem& s, const Tensor& x0, const FwOptions& opt) {
  if (!s.gradient) throw std::invalid_argument("fw_solve requires a surrogate gradient");
  if (!s.set) throw std::invalid_argument("fw_solve requires a feasible set");
  if (!(opt.eps_half > 0.0)) throw std::invalid_argument("fw_solve requires eps_half > 0");
  if (opt.max_inner < 1) throw std::invalid_argument("fw_solve requires max_inner >= 1");

  Tensor x = x0;
  double gap = 0.0;
  for (long long k = 1; k <= opt.max_inner; ++k) {
    const Tensor grad = s.gradient(x);
    if (opt.counters) ++opt.counters->lmo_calls;
    const LmoResult lmo = s.set->linear_minimize(grad);
    const Tensor d = lmo.vertex - x;
    gap = -inner_product(grad, d);
    if (opt.observer) opt.observer(k, x, gap);
    if (gap <= opt.eps_half) {
      return {std::move(x), k, gap, true};
    }
    double eta = 0.0;
    switch (opt.rule.kind) {
      case StepKind::Harmonic:
        eta = step_harmonic(k);
        break;
      case StepKind::ExactLineSearch:
        eta = step_exact_linesearch(s, x, d, opt.linesearch_fallbacks);
        break;
      case StepKind::DemyanovRubinov: {
        const double L = opt.rule.smoothness_override > 0.0 ? opt.rule.smoothness_override
                                                            : s.smoothness;
        eta = step_demyanov_rubinov(grad, x, lmo.vertex, L);
        break;
      }
    }
    x.add_scaled(d, eta);
  }
  return {std::move(x), opt.max_inner, gap, false};
}

}  // namespace dcfw

#include <cmath>
#include <vector>

#include "doctest.h"
#include "dcfw/baselines.hpp"
#include "dcfw/decompositions.hpp"
#include "dcfw/sets.hpp"
#include "helpers.hpp"

using dcfw::BaselineConfig;
using dcfw::DcfwResult;
using dcfw::PhiOracles;
using dcfw::Tensor;

namespace {

PhiOracles smooth_quadratic(const Tensor& c) {
  PhiOracles phi;
  phi.value = [c](const Tensor& x) { return 0.5 * dcfw::norm2_squared(x - c); };
  phi.gradient = [c](const Tensor& x) { return x - c; };
  return phi;
}

}  // namespace

TEST_CASE("plain solver reaches the target on a convex objective") {
  const Tensor c = Tensor::from_vector({0.3, -0.2, 0.0, 0.4});
  const auto set = dcfw::make_box_linf(4, 1.0);
  BaselineConfig cfg;
  cfg.max_steps = 5000;
  cfg.eps_final = 1e-9;
  cfg.rel_stop_factor = 0.0;
  cfg.smoothness = 1.0;

  const DcfwResult res = dcfw::fw_nonconvex(smooth_quadratic(c), set, Tensor({4}), cfg);
  CHECK(res.terminated_by == dcfw::TerminationReason::GapReached);
  CHECK(testing::max_abs_diff(res.x_final, c) < 1e-4);
  // No subgradient oracle exists here; the count must stay zero.
  CHECK(res.counters.subgrad_g_calls == 0);
  CHECK(res.counters.grad_f_calls == res.counters.lmo_calls);
}

TEST_CASE("refreshed-subgradient solver touches g once per step") {
  const Tensor c = Tensor::from_vector({0.2, -0.1});
  const auto set = dcfw::make_box_linf(2, 1.0);
  // phi as an explicit smooth split.
  const dcfw::DcProblem p =
      dcfw::build(dcfw::PgmSpec{smooth_quadratic(c), 1.0, set});

  BaselineConfig cfg;
  cfg.max_steps = 200;
  cfg.eps_final = 1e-8;
  cfg.rel_stop_factor = 0.0;

  const DcfwResult res = dcfw::fw_k(p, Tensor({2}), cfg);
  CHECK(res.terminated_by == dcfw::TerminationReason::GapReached);
  CHECK(res.counters.subgrad_g_calls == static_cast<long long>(res.trace.rows.size()));
  CHECK(testing::max_abs_diff(res.x_final, c) < 1e-3);
}

TEST_CASE("with g = 0 both baselines walk the same path") {
  const Tensor c = Tensor::from_vector({0.4, -0.3, 0.25});
  const auto set = dcfw::make_box_linf(3, 1.0);
  const PhiOracles phi = smooth_quadratic(c);

  dcfw::DcProblem zero_g;
  zero_g.eval_f = phi.value;
  zero_g.grad_f = phi.gradient;
  zero_g.eval_g = [](const Tensor&) { return 0.0; };
  zero_g.subgrad_g = [](const Tensor& x) { return Tensor::zeros_like(x); };
  zero_g.smoothness_f = 1.0;
  zero_g.set = set;

  for (const auto& rule : {dcfw::StepRule::harmonic(), dcfw::StepRule::exact_linesearch(),
                           dcfw::StepRule::demyanov_rubinov()}) {
    BaselineConfig cfg;
    cfg.max_steps = 60;
    cfg.eps_final = 1e-13;
    cfg.rel_stop_factor = 0.0;
    cfg.rule = rule;
    cfg.smoothness = 1.0;

    std::vector<Tensor> path_a, path_b;
    BaselineConfig cfg_a = cfg;
    cfg_a.observer = [&](long long, const Tensor& x, double) { path_a.push_back(x); };
    BaselineConfig cfg_b = cfg;
    cfg_b.observer = [&](long long, const Tensor& x, double) { path_b.push_back(x); };

    const DcfwResult ra = dcfw::fw_nonconvex(phi, set, Tensor({3}), cfg_a);
    const DcfwResult rb = dcfw::fw_k(zero_g, Tensor({3}), cfg_b);

    REQUIRE(path_a.size() == path_b.size());
    for (std::size_t i = 0; i < path_a.size(); ++i) {
      CHECK(testing::max_abs_diff(path_a[i], path_b[i]) == 0.0);  // bit-identical
    }
    CHECK(testing::max_abs_diff(ra.x_final, rb.x_final) == 0.0);
  }
}

TEST_CASE("objective descent under exact line search") {
  const Tensor c = Tensor::from_vector({0.6, 0.6});
  const auto set = dcfw::make_box_linf(2, 0.5);  // optimum on the boundary
  BaselineConfig cfg;
  cfg.max_steps = 100;
  cfg.eps_final = 1e-10;
  cfg.rel_stop_factor = 0.0;
  const PhiOracles phi = smooth_quadratic(c);

  const DcfwResult res = dcfw::fw_nonconvex(phi, set, Tensor({2}), cfg);
  for (std::size_t i = 1; i < res.trace.rows.size(); ++i) {
    CHECK(res.trace.rows[i].phi_value <= res.trace.rows[i - 1].phi_value + 1e-12);
  }
  // Boundary optimum is the clamped target.
  CHECK(res.x_final[0] == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(res.x_final[1] == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("infeasible starts and empty budgets are rejected") {
  const auto set = dcfw::make_simplex(3);
  const PhiOracles phi = smooth_quadratic(Tensor({3}));
  const Tensor bad = Tensor::from_vector({0.5, 0.5, 0.5});
  BaselineConfig cfg;
  CHECK_THROWS_AS(dcfw::fw_nonconvex(phi, set, bad, cfg), std::invalid_argument);
  cfg.max_steps = 0;
  Tensor good({3});
  good[0] = 1.0;
  CHECK_THROWS_AS(dcfw::fw_nonconvex(phi, set, good, cfg), std::invalid_argument);
}

// Microbenchmarks for the kernels that dominate solver wall time: the
// assignment solver, the inner FW loop under each step rule, the proximal
// residual subsolve, and one end-to-end relax-and-round pass.

#include <benchmark/benchmark.h>

#include <cstdint>

#include "dcfw/fw.hpp"
#include "dcfw/gaps.hpp"
#include "dcfw/lap.hpp"
#include "dcfw/qap.hpp"
#include "dcfw/rng.hpp"
#include "dcfw/sets.hpp"
#include "dcfw/solver.hpp"
#include "dcfw/tensor.hpp"

namespace {

using dcfw::SplitMix64;
using dcfw::Tensor;

Tensor random_matrix(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Tensor m({n, n});
  for (std::size_t i = 0; i < n * n; ++i) m[i] = 2.0 * rng.next_double() - 1.0;
  return m;
}

Tensor random_symmetric(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Tensor m({n, n});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      m.at(i, j) = m.at(j, i) = rng.next_double();
    }
  }
  return m;
}

void BM_LapSolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Tensor cost = random_matrix(n, 17);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dcfw::solve_lap(cost));
  }
}
BENCHMARK(BM_LapSolve)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

// 256 inner iterations on a simplex quadratic; reports iterations per second.
void BM_InnerFw(benchmark::State& state) {
  const std::size_t dim = 64;
  Tensor c({dim});
  SplitMix64 rng(3);
  for (std::size_t i = 0; i < dim; ++i) c[i] = rng.next_double() / static_cast<double>(dim);

  dcfw::SurrogateProblem s;
  s.set = dcfw::make_simplex(dim);
  s.smoothness = 1.0;
  s.value = [c](const Tensor& x) { return 0.5 * dcfw::norm2_squared(x - c); };
  s.gradient = [c](const Tensor& x) { return x - c; };

  Tensor x0({dim});
  x0[0] = 1.0;
  dcfw::FwOptions opt;
  opt.eps_half = 1e-300;  // let max_inner bind
  opt.max_inner = 256;
  switch (state.range(0)) {
    case 0: opt.rule = dcfw::StepRule::harmonic(); break;
    case 1: opt.rule = dcfw::StepRule::exact_linesearch(); break;
    default: opt.rule = dcfw::StepRule::demyanov_rubinov(); break;
  }

  long long iterations = 0;
  for (auto _ : state) {
    const dcfw::FwResult res = dcfw::fw_solve(s, x0, opt);
    iterations += res.iterations;
    benchmark::DoNotOptimize(res.x);
  }
  state.SetItemsProcessed(iterations);
}
BENCHMARK(BM_InnerFw)->Arg(0)->Arg(1)->Arg(2);

void BM_GapPpm(benchmark::State& state) {
  dcfw::PhiOracles phi;
  phi.value = [](const Tensor& x) {
    double v = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) v += 0.5 * x[i] * x[i] + 0.2 * std::sin(2.0 * x[i]);
    return v;
  };
  phi.gradient = [](const Tensor& x) {
    Tensor g = Tensor::zeros_like(x);
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = x[i] + 0.4 * std::cos(2.0 * x[i]);
    return g;
  };
  const dcfw::SetPtr set = dcfw::make_box_linf(4, 1.5);
  Tensor x = Tensor::from_vector({0.3, -0.4, 0.1, 0.6});
  dcfw::ProxOptions opt;
  opt.tol_absolute = 1e-10;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dcfw::gap_ppm(phi, set, x, 2.0, opt));
  }
}
BENCHMARK(BM_GapPpm);

void BM_RelaxRound(benchmark::State& state) {
  dcfw::QapInstance inst;
  inst.n = 10;
  inst.a = random_symmetric(10, 5);
  inst.b = random_symmetric(10, 6);

  dcfw::QapRunConfig rc;
  rc.seed = 0;
  rc.dcfw.tolerance = dcfw::ToleranceRule::adaptive(0.8);
  rc.dcfw.eps_final = 1e-7;
  rc.dcfw.rel_stop_factor = 1e-3;
  rc.dcfw.max_outer = 100;
  rc.dcfw.max_inner = 50000;
  rc.dcfw.rule = dcfw::StepRule::exact_linesearch();
  for (auto _ : state) {
    benchmark::DoNotOptimize(dcfw::relax_and_round(inst, dcfw::QapSolver::DcfwV1, rc));
  }
}
BENCHMARK(BM_RelaxRound);

}  // namespace

BENCHMARK_MAIN();

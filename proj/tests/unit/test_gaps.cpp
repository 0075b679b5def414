#include <cmath>
#include <numbers>

#include "doctest.h"
#include "dcfw/gaps.hpp"
#include "dcfw/problem.hpp"
#include "dcfw/sets.hpp"
#include "helpers.hpp"

using dcfw::DcProblem;
using dcfw::PhiOracles;
using dcfw::Tensor;

namespace {

// phi(x) = 1/2 ||x - c||^2 as oracles and as an explicit split with
// f = (L/2) ||x||^2.
PhiOracles quadratic_phi(const Tensor& c) {
  PhiOracles phi;
  phi.value = [c](const Tensor& x) { return 0.5 * dcfw::norm2_squared(x - c); };
  phi.gradient = [c](const Tensor& x) { return x - c; };
  return phi;
}

DcProblem quadratic_split(const Tensor& c, double L, const dcfw::SetPtr& set,
                          dcfw::DcStructure structure) {
  DcProblem p;
  p.eval_f = [L](const Tensor& x) { return 0.5 * L * dcfw::norm2_squared(x); };
  p.grad_f = [L](const Tensor& x) { return L * x; };
  // g = f - phi, convex whenever L >= 1.
  p.eval_g = [L, c](const Tensor& x) {
    return 0.5 * L * dcfw::norm2_squared(x) - 0.5 * dcfw::norm2_squared(x - c);
  };
  p.subgrad_g = [L, c](const Tensor& x) {
    Tensor u = L * x;
    u.add_scaled(x - c, -1.0);
    return u;
  };
  p.smoothness_f = L;
  p.strong_convexity_f = L;
  p.set = set;
  p.structure = structure;
  return p;
}

}  // namespace

TEST_CASE("residuals of a convex quadratic have closed-form values") {
  const Tensor c = Tensor::from_vector({0.3, -0.1});
  const auto box = dcfw::make_box_linf(2, 1.0);  // c is interior
  const PhiOracles phi = quadratic_phi(c);
  const Tensor x = Tensor::from_vector({0.8, 0.4});
  const double dist2 = dcfw::norm2_squared(x - c);

  // Projection residual: proj(x - grad) = c, so the value is phi(x) - phi*.
  CHECK(dcfw::gap_pgm(phi, box, x, 1.0) == doctest::Approx(0.5 * dist2).epsilon(1e-12));

  // Proximal residual: the prox point is the midpoint (c + x) / 2.
  const auto ppm = dcfw::gap_ppm(phi, box, x, 1.0);
  CHECK(ppm.value == doctest::Approx(0.125 * dist2).epsilon(1e-5));
  CHECK(testing::max_abs_diff(ppm.prox_point, 0.5 * (c + x)) < 1e-5);

  // Both vanish at the stationary point.
  CHECK(dcfw::gap_pgm(phi, box, c, 1.0) <= 1e-14);
  CHECK(dcfw::gap_ppm(phi, box, c, 1.0).value <= 1e-8);
}

TEST_CASE("closed-form split residual agrees with the subsolve route") {
  const Tensor c = Tensor::from_vector({0.4, -0.3, 0.2});
  const auto box = dcfw::make_box_linf(3, 1.0);
  dcfw::SplitMix64 rng(404);

  for (int rep = 0; rep < 10; ++rep) {
    const Tensor x = box->sample_point(rng);
    const DcProblem split = quadratic_split(c, 2.0, box, dcfw::DcStructure::PgmSplit);
    const DcProblem general = quadratic_split(c, 2.0, box, dcfw::DcStructure::General);

    const dcfw::GapValue fast = dcfw::gap_dc(split, x, 1e-10);
    const dcfw::GapValue slow = dcfw::gap_dc_via_subproblem(general, x, 1e-10);
    CHECK(fast.value == doctest::Approx(slow.value).epsilon(1e-6));
    CHECK(fast.bracket == 0.0);      // exact, no solver involved
    CHECK(slow.bracket <= 1e-10);    // certified by the inner gap
    CHECK(slow.value >= 0.0);
  }
}

TEST_CASE("interior points make projection and split residuals coincide") {
  // When the gradient step stays inside the set, the closed form collapses to
  // ||grad phi||^2 / (2L) for both quantities.
  const Tensor c = Tensor::from_vector({0.05, -0.05});
  const auto box = dcfw::make_box_linf(2, 4.0);
  const Tensor x = Tensor::from_vector({0.3, 0.25});
  const DcProblem split = quadratic_split(c, 2.0, box, dcfw::DcStructure::PgmSplit);
  const double pgm = dcfw::gap_pgm(split, x);
  const double dc = dcfw::gap_dc(split, x, 1e-12).value;
  CHECK(pgm == doctest::Approx(dcfw::norm2_squared(x - c) / 4.0).epsilon(1e-12));
  CHECK(dc == doctest::Approx(pgm).epsilon(1e-12));
}

TEST_CASE("concave curvature drives the residuals apart") {
  // phi(t) = -t^2/2 on [-10, 10], measured at t = 1 with L = 2: the split
  // residual is 1/4 while the proximal residual is 1. Neither dominates the
  // other in general; these frozen values pin the behavior down.
  PhiOracles phi;
  phi.value = [](const Tensor& x) { return -0.5 * x[0] * x[0]; };
  phi.gradient = [](const Tensor& x) { return dcfw::Tensor::from_vector({-x[0]}); };
  const auto box = dcfw::make_box_linf(1, 10.0);
  const Tensor x = Tensor::from_vector({1.0});

  CHECK(dcfw::gap_pgm(phi, box, x, 2.0) == doctest::Approx(0.25).epsilon(1e-12));

  const auto ppm = dcfw::gap_ppm(phi, box, x, 2.0);
  CHECK(ppm.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(ppm.prox_point[0] == doctest::Approx(2.0).epsilon(1e-6));

  // The explicit split with f = t^2 gives the same 1/4 via the closed form.
  DcProblem p;
  p.eval_f = [](const Tensor& t) { return t[0] * t[0]; };
  p.grad_f = [](const Tensor& t) { return dcfw::Tensor::from_vector({2.0 * t[0]}); };
  p.eval_g = [](const Tensor& t) { return 1.5 * t[0] * t[0]; };
  p.subgrad_g = [](const Tensor& t) { return dcfw::Tensor::from_vector({3.0 * t[0]}); };
  p.smoothness_f = 2.0;
  p.strong_convexity_f = 2.0;
  p.set = box;
  p.structure = dcfw::DcStructure::PgmSplit;
  CHECK(dcfw::gap_dc(p, x, 1e-12).value == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("report carries the relevant residuals per structure") {
  const Tensor c = Tensor::from_vector({0.2, 0.2});
  const auto box = dcfw::make_box_linf(2, 1.0);
  const Tensor x = Tensor::from_vector({-0.5, 0.75});

  const DcProblem split = quadratic_split(c, 1.5, box, dcfw::DcStructure::PgmSplit);
  const dcfw::GapReport r1 = dcfw::compute_gap_report(split, x, 1e-8);
  CHECK(r1.pgm.has_value());
  CHECK(r1.dc_value == doctest::Approx(dcfw::gap_dc(split, x, 1e-8).value).epsilon(1e-9));

  const DcProblem general = quadratic_split(c, 1.5, box, dcfw::DcStructure::General);
  const dcfw::GapReport r2 = dcfw::compute_gap_report(general, x, 1e-8);
  CHECK_FALSE(r2.pgm.has_value());
  CHECK_FALSE(r2.ppm.has_value());
  CHECK(r2.dc_value == doctest::Approx(r1.dc_value).epsilon(1e-5));
}

TEST_CASE("grid coordinates are exact and rows are in row-major order") {
  PhiOracles phi;
  const double pi = std::numbers::pi;
  phi.value = [pi](const Tensor& x) { return std::sin(pi * x[0]) * std::cos(pi * x[1]); };
  phi.gradient = [pi](const Tensor& x) {
    return Tensor::from_vector({pi * std::cos(pi * x[0]) * std::cos(pi * x[1]),
                                -pi * std::sin(pi * x[0]) * std::sin(pi * x[1])});
  };
  dcfw::ProxOptions prox;
  prox.max_iterations = 200;

  const auto rows = dcfw::evaluate_gap_grid(phi, pi * pi, 5, -1.0, 1.0, prox, 2);
  REQUIRE(rows.size() == 25);
  // Row-major: x1 varies slowest; the coordinates hit the half-integers exactly.
  CHECK(rows[0].x1 == -1.0);
  CHECK(rows[0].x2 == -1.0);
  CHECK(rows[7].x1 == -0.5);
  CHECK(rows[7].x2 == 0.0);
  CHECK(rows[24].x1 == 1.0);
  CHECK(rows[24].x2 == 1.0);
  for (const auto& r : rows) {
    CHECK(r.phi == doctest::Approx(std::sin(pi * r.x1) * std::cos(pi * r.x2)).epsilon(1e-12));
    CHECK(r.gap_pgm >= 0.0);
    CHECK(r.gap_ppm >= 0.0);
  }

  // Single-threaded evaluation is bit-identical.
  const auto rows1 = dcfw::evaluate_gap_grid(phi, pi * pi, 5, -1.0, 1.0, prox, 1);
  REQUIRE(rows1.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].gap_pgm == rows1[i].gap_pgm);
    CHECK(rows[i].gap_ppm == rows1[i].gap_ppm);
  }
}

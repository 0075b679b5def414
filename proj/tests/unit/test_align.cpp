#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "doctest.h"
#include "dcfw/align.hpp"
#include "dcfw/sets.hpp"
#include "dcfw/solver.hpp"
#include "helpers.hpp"

using dcfw::AlignProblem;
using dcfw::AlignSynthetic;
using dcfw::Tensor;

namespace {

Eigen::MatrixXd to_eigen(const Tensor& t) {
  Eigen::MatrixXd m(t.rows(), t.cols());
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) m(i, j) = t.at(i, j);
  }
  return m;
}

}  // namespace

TEST_CASE("synthetic instances have the promised structure") {
  const std::size_t d = 5, n = 60;
  const AlignSynthetic synth = dcfw::make_align_synthetic(d, n, 0.4, 0.0, 1e-3, 9);
  const AlignProblem& prob = synth.problem;
  CHECK(prob.d == d);
  CHECK(prob.n == n);

  // Ground truth is orthogonal.
  const Eigen::MatrixXd xt = to_eigen(synth.x_true);
  CHECK((xt.transpose() * xt - Eigen::MatrixXd::Identity(d, d)).norm() < 1e-10);

  // Mask is 0/1 with roughly the requested density; targets vanish off-mask.
  double density = 0.0;
  for (std::size_t i = 0; i < prob.mask.size(); ++i) {
    CHECK((prob.mask[i] == 0.0 || prob.mask[i] == 1.0));
    CHECK((prob.mask[i] == 1.0 || prob.y[i] == 0.0));
    density += prob.mask[i];
  }
  density /= static_cast<double>(prob.mask.size());
  CHECK(density == doctest::Approx(0.4).epsilon(0.2));

  // Noiseless observations equal the masked true embedding image.
  const Tensor image = dcfw::matmul(synth.x_true, prob.e1);
  for (std::size_t i = 0; i < prob.y.size(); ++i) {
    if (prob.mask[i] == 1.0) CHECK(prob.y[i] == doctest::Approx(image[i]).epsilon(1e-12));
  }
}

TEST_CASE("noise level does not perturb the mask or the carriers") {
  const AlignSynthetic clean = dcfw::make_align_synthetic(4, 30, 0.3, 0.0, 1e-3, 77);
  const AlignSynthetic noisy = dcfw::make_align_synthetic(4, 30, 0.3, 0.5, 1e-3, 77);
  CHECK(testing::max_abs_diff(clean.problem.mask, noisy.problem.mask) == 0.0);
  CHECK(testing::max_abs_diff(clean.problem.e1, noisy.problem.e1) == 0.0);
  CHECK(testing::max_abs_diff(clean.x_true, noisy.x_true) == 0.0);
  // And the observations do move where observed.
  CHECK(testing::max_abs_diff(clean.problem.y, noisy.problem.y) > 1e-3);
}

TEST_CASE("oracles: value, gradient, curvature constant, and nuclear term") {
  const AlignSynthetic synth = dcfw::make_align_synthetic(4, 24, 0.5, 0.1, 0.05, 11);
  const dcfw::DcProblem p = dcfw::align_oracles(synth.problem);

  // Smoothness constant is sigma_max(E1)^2 / n.
  const double smax = to_eigen(synth.problem.e1).jacobiSvd().singularValues()(0);
  CHECK(p.smoothness_f == doctest::Approx(smax * smax / 24.0).epsilon(1e-8));

  dcfw::SplitMix64 rng(12);
  for (int rep = 0; rep < 6; ++rep) {
    const Tensor x = p.set->sample_point(rng);

    // f gradient against central differences.
    const Tensor fd = testing::finite_diff_gradient(p.eval_f, x);
    CHECK(testing::max_abs_diff(p.grad_f(x), fd) < 1e-5);

    // g = lambda ||X||_* via dense SVD.
    const double nuclear = to_eigen(x).jacobiSvd().singularValues().sum();
    CHECK(p.eval_g(x) == doctest::Approx(0.05 * nuclear).epsilon(1e-9));

    // Subgradient inequality for the nuclear norm.
    const Tensor y = p.set->sample_point(rng);
    const Tensor u = p.subgrad_g(x);
    CHECK(p.eval_g(y) >= p.eval_g(x) + dcfw::inner_product(u, y - x) - 1e-9);
  }

  // Exactly zero input short-circuits to a zero subgradient.
  const Tensor zero({4, 4});
  CHECK(dcfw::norm2(p.subgrad_g(zero)) == 0.0);
  CHECK(p.eval_g(zero) == 0.0);
}

TEST_CASE("exact line search minimizes the surrogate along segments") {
  const AlignSynthetic synth = dcfw::make_align_synthetic(4, 20, 0.5, 0.0, 0.01, 21);
  const dcfw::DcProblem p = dcfw::align_oracles(synth.problem);
  REQUIRE(p.exact_linesearch);

  dcfw::SplitMix64 rng(22);
  for (int rep = 0; rep < 8; ++rep) {
    const Tensor x = p.set->sample_point(rng);
    const Tensor v = p.set->sample_point(rng);
    const Tensor d = v - x;
    const Tensor u = p.subgrad_g(x);
    const double eta = p.exact_linesearch(x, d, u);
    REQUIRE(std::isfinite(eta));
    const auto q = [&](double t) {
      const Tensor y = x + t * d;
      return p.eval_f(y) - dcfw::inner_product(u, y);
    };
    const double oracle = testing::grid_minimize_unit(q);
    CHECK(q(eta) <= q(oracle) + 1e-9);
  }

  // Zero direction gives a zero step.
  const Tensor x = p.set->sample_point(rng);
  CHECK(p.exact_linesearch(x, Tensor({4, 4}), p.subgrad_g(x)) == 0.0);
}

TEST_CASE("quality metrics recognize the ground truth and its distortions") {
  const AlignSynthetic synth = dcfw::make_align_synthetic(5, 40, 0.5, 0.0, 1e-3, 33);

  const dcfw::AlignmentQuality exact =
      dcfw::alignment_quality(synth.x_true, synth.problem, synth.x_true);
  CHECK(exact.relative_error < 1e-12);
  CHECK(exact.neighbor_accuracy == 1.0);
  CHECK_FALSE(exact.degenerate_rounding);

  // A scaled copy still rounds to the same orthogonal factor.
  Tensor scaled = synth.x_true;
  scaled *= 0.37;
  const dcfw::AlignmentQuality shrunk =
      dcfw::alignment_quality(scaled, synth.problem, synth.x_true);
  CHECK(shrunk.relative_error < 1e-10);
  CHECK(shrunk.neighbor_accuracy == 1.0);

  // The zero matrix has no polar factor; the identity fallback is flagged.
  const dcfw::AlignmentQuality zero =
      dcfw::alignment_quality(Tensor({5, 5}), synth.problem, synth.x_true);
  CHECK(zero.degenerate_rounding);

  // A wrong rotation scores poorly on neighbor accuracy.
  const Tensor wrong = dcfw::make_align_synthetic(5, 40, 0.5, 0.0, 1e-3, 99).x_true;
  const dcfw::AlignmentQuality off = dcfw::alignment_quality(wrong, synth.problem, synth.x_true);
  CHECK(off.neighbor_accuracy < 0.9);
}

TEST_CASE("problem validation rejects inconsistent shapes and masks") {
  AlignProblem p;
  p.d = 3;
  p.n = 10;
  p.lambda = 0.1;
  p.e1 = Tensor({3, 10});
  p.y = Tensor({3, 10});
  p.mask = Tensor({3, 10});
  CHECK_NOTHROW(p.validate());

  AlignProblem bad = p;
  bad.mask = Tensor({3, 9});
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  AlignProblem fractional = p;
  fractional.mask[0] = 0.5;
  CHECK_THROWS_AS(fractional.validate(), std::invalid_argument);

  AlignProblem leaky = p;
  leaky.y[0] = 1.0;  // observation outside the mask
  CHECK_THROWS_AS(leaky.validate(), std::invalid_argument);

  CHECK_THROWS_AS(dcfw::make_align_synthetic(1, 10, 0.5, 0.0, 0.1, 0), std::invalid_argument);
  CHECK_THROWS_AS(dcfw::make_align_synthetic(4, 3, 0.5, 0.0, 0.1, 0), std::invalid_argument);
}

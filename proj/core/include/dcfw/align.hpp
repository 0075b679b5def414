// Alignment of partially observed embeddings: minimize the masked quadratic
// loss minus a nuclear-norm bonus over the unit spectral ball. The nuclear
// term rewards solutions with singular values at the boundary, i.e. nearly
// orthogonal transforms.
#pragma once

#include <cstdint>

#include "dcfw/problem.hpp"
#include "dcfw/tensor.hpp"

namespace dcfw {

struct AlignProblem {
  Tensor e1;    // d x n source embeddings
  Tensor y;     // d x n observed targets, zero wherever the mask is zero
  Tensor mask;  // d x n of {0, 1}
  double lambda = 0.0;
  std::size_t d = 0;
  std::size_t n = 0;

  // Throws std::invalid_argument on shape mismatches, mask entries outside
  // {0, 1}, unmasked nonzeros in y, or negative lambda.
  void validate() const;
};

struct AlignSynthetic {
  AlignProblem problem;
  Tensor x_true;  // d x d orthogonal ground truth
};

// E1 Gaussian, X_true a random orthogonal matrix, targets X_true E1 plus
// entrywise noise, observed independently with probability obs_prob.
// Deterministic in seed; the mask draw does not depend on the noise level.
AlignSynthetic make_align_synthetic(std::size_t d, std::size_t n, double obs_prob, double noise,
                                    double lambda, std::uint64_t seed);

// f(X) = (1/2n) ||mask (X E1) - Y||_F^2 with its exact-line-search closed
// form; g(X) = lambda ||X||_* with subgradient lambda U V^T from a full SVD
// (zero at X = 0); feasible set the unit spectral ball.
DcProblem align_oracles(const AlignProblem& prob);

struct AlignmentQuality {
  double relative_error = 0.0;     // ||X_r E1 - X_true E1||_F / ||X_true E1||_F
  double neighbor_accuracy = 0.0;  // fraction of columns mapped nearest their counterpart
  bool degenerate_rounding = false;  // X ~ 0: identity used instead of the polar factor
  Tensor x_rounded;
};

// Rounds X to the nearest orthogonal matrix (polar factor U V^T) and scores
// it against the ground truth.
AlignmentQuality alignment_quality(const Tensor& x, const AlignProblem& prob,
                                   const Tensor& x_true);

}  // namespace dcfw

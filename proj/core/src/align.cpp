#include "dcfw/align.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dcfw/decompositions.hpp"
#include "dcfw/rng.hpp"
#include "dcfw/sets.hpp"

namespace dcfw {

namespace {

Eigen::MatrixXd to_eigen(const Tensor& t) {
  Eigen::MatrixXd m(t.rows(), t.cols());
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.cols(); ++c) m(static_cast<Eigen::Index>(r),
                                                 static_cast<Eigen::Index>(c)) = t.at(r, c);
  }
  return m;
}

Tensor from_eigen(const Eigen::MatrixXd& m) {
  Tensor t({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())});
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      t.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = m(r, c);
    }
  }
  return t;
}

// mask (x e1) - y; already zero off-mask because y is.
Tensor masked_residual(const AlignProblem& prob, const Tensor& x) {
  Tensor r = matmul(x, prob.e1);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = prob.mask[i] * r[i] - prob.y[i];
  return r;
}

bool is_zero(const Tensor& t) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] != 0.0) return false;
  }
  return true;
}

}  // namespace

void AlignProblem::validate() const {
  if (d < 2) throw std::invalid_argument("AlignProblem: d must be >= 2");
  if (n < d) throw std::invalid_argument("AlignProblem: n must be >= d");
  if (lambda < 0.0) throw std::invalid_argument("AlignProblem: lambda must be >= 0");
  const std::vector<std::size_t> expect{d, n};
  if (e1.shape() != expect || y.shape() != expect || mask.shape() != expect) {
    throw std::invalid_argument("AlignProblem: e1, y, mask must all be d x n");
  }
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] != 0.0 && mask[i] != 1.0) {
      throw std::invalid_argument("AlignProblem: mask entries must be 0 or 1");
    }
    if (mask[i] == 0.0 && y[i] != 0.0) {
      throw std::invalid_argument("AlignProblem: y must be zero off-mask");
    }
  }
}

AlignSynthetic make_align_synthetic(std::size_t d, std::size_t n, double obs_prob, double noise,
                                    double lambda, std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("make_align_synthetic: d must be >= 2");
  if (n < d) throw std::invalid_argument("make_align_synthetic: n must be >= d");
  if (!(obs_prob > 0.0) || obs_prob > 1.0) {
    throw std::invalid_argument("make_align_synthetic: obs_prob must be in (0, 1]");
  }
  if (noise < 0.0) throw std::invalid_argument("make_align_synthetic: noise must be >= 0");

  SplitMix64 rng(seed);

  Tensor e1({d, n});
  for (std::size_t i = 0; i < e1.size(); ++i) e1[i] = rng.next_gaussian();

  // Orthogonal ground truth: QR of a Gaussian matrix, signs fixed so the
  // factor is unique.
  Eigen::MatrixXd gauss(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      gauss(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rng.next_gaussian();
    }
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r_factor = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index c = 0; c < q.cols(); ++c) {
    if (r_factor(c, c) < 0.0) q.col(c) = -q.col(c);
  }
  const Tensor x_true = from_eigen(q);

  Tensor targets = matmul(x_true, e1);
  for (std::size_t i = 0; i < targets.size(); ++i) targets[i] += noise * rng.next_gaussian();

  // Mask drawn after a fixed number of preceding draws, so it is identical
  // across noise levels for the same seed.
  Tensor mask({d, n});
  for (std::size_t i = 0; i < mask.size(); ++i) {
    mask[i] = rng.next_double() < obs_prob ? 1.0 : 0.0;
  }

  Tensor y({d, n});
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = mask[i] * targets[i];

  AlignSynthetic out;
  out.problem.e1 = std::move(e1);
  out.problem.y = std::move(y);
  out.problem.mask = std::move(mask);
  out.problem.lambda = lambda;
  out.problem.d = d;
  out.problem.n = n;
  out.problem.validate();
  out.x_true = x_true;
  return out;
}

DcProblem align_oracles(const AlignProblem& prob) {
  prob.validate();
  const AlignProblem p = prob;  // own a copy; oracles outlive the argument
  const double inv_n = 1.0 / static_cast<double>(p.n);
  const Tensor e1t = transpose(p.e1);
  const double lambda = p.lambda;

  DcProblem out;
  out.eval_f = [p, inv_n](const Tensor& x) {
    return 0.5 * inv_n * norm2_squared(masked_residual(p, x));
  };
  out.grad_f = [p, e1t, inv_n](const Tensor& x) {
    Tensor g = matmul(masked_residual(p, x), e1t);
    g *= inv_n;
    return g;
  };
  out.eval_g = [lambda](const Tensor& x) {
    if (is_zero(x)) return 0.0;
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(x));
    return lambda * svd.singularValues().sum();
  };
  out.subgrad_g = [lambda](const Tensor& x) {
    if (is_zero(x)) return Tensor::zeros_like(x);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(x),
                                                Eigen::ComputeFullU | Eigen::ComputeFullV);
    Tensor g = from_eigen(svd.matrixU() * svd.matrixV().transpose());
    g *= lambda;
    return g;
  };
  const double sigma = spectral_norm(p.e1);
  out.smoothness_f = sigma * sigma * inv_n;
  out.strong_convexity_f = 0.0;
  out.set = make_spectral_ball(p.d, 1.0);
  // Surrogate is quadratic along segments: (1/2n)||R + eta M||^2 - <u, X+etaD>
  // with M the masked image of the direction.
  out.exact_linesearch = [p, inv_n](const Tensor& x, const Tensor& d, const Tensor& u) {
    Tensor m = matmul(d, p.e1);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] *= p.mask[i];
    const double mm = inv_n * norm2_squared(m);
    if (mm == 0.0) {
      return norm2_squared(d) == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    }
    const Tensor r = masked_residual(p, x);
    const double eta = (inner_product(u, d) - inv_n * inner_product(r, m)) / mm;
    return eta;
  };
  out.structure = DcStructure::General;
  return out;
}

AlignmentQuality alignment_quality(const Tensor& x, const AlignProblem& prob,
                                   const Tensor& x_true) {
  prob.validate();
  const std::vector<std::size_t> expect{prob.d, prob.d};
  if (x.shape() != expect || x_true.shape() != expect) {
    throw std::invalid_argument("alignment_quality: x and x_true must be d x d");
  }

  AlignmentQuality q;
  if (is_zero(x)) {
    q.degenerate_rounding = true;
    q.x_rounded = from_eigen(
        Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(prob.d),
                                  static_cast<Eigen::Index>(prob.d)));
  } else {
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(x),
                                                Eigen::ComputeFullU | Eigen::ComputeFullV);
    q.x_rounded = from_eigen(svd.matrixU() * svd.matrixV().transpose());
  }

  const Tensor mapped = matmul(q.x_rounded, prob.e1);
  const Tensor truth = matmul(x_true, prob.e1);
  q.relative_error = norm2(mapped - truth) / norm2(truth);

  std::size_t hits = 0;
  for (std::size_t j = 0; j < prob.n; ++j) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_k = 0;
    for (std::size_t k = 0; k < prob.n; ++k) {
      double dist = 0.0;
      for (std::size_t r = 0; r < prob.d; ++r) {
        const double diff = mapped.at(r, j) - truth.at(r, k);
        dist += diff * diff;
      }
      if (dist < best) {
        best = dist;
        best_k = k;
      }
    }
    if (best_k == j) ++hits;
  }
  q.neighbor_accuracy = static_cast<double>(hits) / static_cast<double>(prob.n);
  return q;
}

}  // namespace dcfw

#include "dcfw/sets.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "dcfw/lap.hpp"

namespace dcfw {

namespace {

Eigen::MatrixXd to_eigen(const Tensor& t) {
  Eigen::MatrixXd m(t.rows(), t.cols());
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) m(i, j) = t.at(i, j);
  return m;
}

Tensor from_eigen(const Eigen::MatrixXd& m) {
  Tensor t({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())});
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      t.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
  return t;
}

}  // namespace

void FeasibleSet::require_shape(const Tensor& t, const char* what) const {
  if (t.shape() != ambient_shape()) {
    std::ostringstream os;
    os << what << " has shape " << t.shape_string() << ", set expects a different shape";
    throw std::invalid_argument(os.str());
  }
}

namespace {

class SimplexSet final : public FeasibleSet {
 public:
  explicit SimplexSet(std::size_t dim) : dim_(dim) {
    if (dim_ == 0) throw std::invalid_argument("simplex dimension must be positive");
  }

  std::vector<std::size_t> ambient_shape() const override { return {dim_}; }

  double diameter() const override { return dim_ > 1 ? std::sqrt(2.0) : 0.0; }

  LmoResult linear_minimize(const Tensor& direction) const override {
    require_shape(direction, "lmo direction");
    std::size_t best = 0;
    for (std::size_t i = 1; i < dim_; ++i) {
      if (direction[i] < direction[best]) best = i;  // strict: first minimum wins
    }
    Tensor v({dim_});
    v[best] = 1.0;
    return {std::move(v), direction[best]};
  }

  // Exact Euclidean projection by the sorting method: threshold tau such that
  // sum max(y_i - tau, 0) = 1.
  Tensor project(const Tensor& point) const override {
    require_shape(point, "projection point");
    std::vector<double> u(point.data());
    std::sort(u.begin(), u.end(), std::greater<double>());
    double running = 0.0, tau = 0.0;
    std::size_t rho = 0;
    for (std::size_t j = 0; j < dim_; ++j) {
      running += u[j];
      const double t = (running - 1.0) / static_cast<double>(j + 1);
      if (u[j] - t > 0.0) {
        rho = j + 1;
        tau = t;
      }
    }
    (void)rho;
    Tensor out({dim_});
    for (std::size_t i = 0; i < dim_; ++i) out[i] = std::max(point[i] - tau, 0.0);
    return out;
  }

  std::string membership_violation(const Tensor& point, double tol) const override {
    require_shape(point, "membership point");
    double sum = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      if (point[i] < -tol) {
        std::ostringstream os;
        os << "simplex coordinate " << i << " is negative (" << point[i] << ")";
        return os.str();
      }
      sum += point[i];
    }
    if (std::abs(sum - 1.0) > tol) {
      std::ostringstream os;
      os << "simplex coordinates sum to " << sum << ", expected 1";
      return os.str();
    }
    return {};
  }

  Tensor sample_point(SplitMix64& rng) const override {
    // Exponential spacings normalized to sum 1 give a uniform Dirichlet draw.
    Tensor x({dim_});
    double sum = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      const double e = -std::log(1.0 - rng.next_double());
      x[i] = e;
      sum += e;
    }
    for (std::size_t i = 0; i < dim_; ++i) x[i] /= sum;
    return x;
  }

  std::string describe() const override {
    return "simplex(" + std::to_string(dim_) + ")";
  }

 private:
  std::size_t dim_;
};

class BoxLinfSet final : public FeasibleSet {
 public:
  BoxLinfSet(Tensor center, double radius) : center_(std::move(center)), radius_(radius) {
    if (radius_ <= 0.0) throw std::invalid_argument("box radius must be positive");
    if (center_.rank() != 1) throw std::invalid_argument("box center must be rank 1");
  }

  std::vector<std::size_t> ambient_shape() const override { return {center_.size()}; }

  double diameter() const override {
    return 2.0 * radius_ * std::sqrt(static_cast<double>(center_.size()));
  }

  LmoResult linear_minimize(const Tensor& direction) const override {
    require_shape(direction, "lmo direction");
    Tensor v({center_.size()});
    double obj = 0.0;
    for (std::size_t i = 0; i < center_.size(); ++i) {
      // sign(0) treated as +1 so zero-gradient coordinates pick the lower face.
      const double s = direction[i] >= 0.0 ? 1.0 : -1.0;
      v[i] = center_[i] - radius_ * s;
      obj += direction[i] * v[i];
    }
    return {std::move(v), obj};
  }

  Tensor project(const Tensor& point) const override {
    require_shape(point, "projection point");
    Tensor out({center_.size()});
    for (std::size_t i = 0; i < center_.size(); ++i) {
      out[i] = std::clamp(point[i], center_[i] - radius_, center_[i] + radius_);
    }
    return out;
  }

  std::string membership_violation(const Tensor& point, double tol) const override {
    require_shape(point, "membership point");
    for (std::size_t i = 0; i < center_.size(); ++i) {
      const double dev = std::abs(point[i] - center_[i]);
      if (dev > radius_ + tol) {
        std::ostringstream os;
        os << "box coordinate " << i << " deviates " << dev << " > radius " << radius_;
        return os.str();
      }
    }
    return {};
  }

  Tensor sample_point(SplitMix64& rng) const override {
    Tensor x({center_.size()});
    for (std::size_t i = 0; i < center_.size(); ++i) {
      x[i] = center_[i] + radius_ * (2.0 * rng.next_double() - 1.0);
    }
    return x;
  }

  std::string describe() const override {
    return "box_linf(dim=" + std::to_string(center_.size()) +
           ", radius=" + std::to_string(radius_) + ")";
  }

 private:
  Tensor center_;
  double radius_;
};

class BallL2Set final : public FeasibleSet {
 public:
  BallL2Set(Tensor center, double radius) : center_(std::move(center)), radius_(radius) {
    if (radius_ <= 0.0) throw std::invalid_argument("ball radius must be positive");
    if (center_.rank() != 1) throw std::invalid_argument("ball center must be rank 1");
  }

  std::vector<std::size_t> ambient_shape() const override { return {center_.size()}; }

  double diameter() const override { return 2.0 * radius_; }

  double strong_convexity() const override { return 1.0 / radius_; }

  LmoResult linear_minimize(const Tensor& direction) const override {
    require_shape(direction, "lmo direction");
    const double nrm = norm2(direction);
    if (nrm == 0.0) {
      Tensor v = center_;
      return {std::move(v), inner_product(direction, center_)};
    }
    Tensor v = center_;
    v.add_scaled(direction, -radius_ / nrm);
    const double obj = inner_product(direction, v);
    return {std::move(v), obj};
  }

  Tensor project(const Tensor& point) const override {
    require_shape(point, "projection point");
    Tensor delta = point - center_;
    const double nrm = norm2(delta);
    if (nrm <= radius_) return point;
    Tensor out = center_;
    out.add_scaled(delta, radius_ / nrm);
    return out;
  }

  std::string membership_violation(const Tensor& point, double tol) const override {
    require_shape(point, "membership point");
    const double nrm = norm2(point - center_);
    if (nrm > radius_ + tol) {
      std::ostringstream os;
      os << "ball point at distance " << nrm << " > radius " << radius_;
      return os.str();
    }
    return {};
  }

  Tensor sample_point(SplitMix64& rng) const override {
    // Gaussian direction, radius scaled by u^(1/d) for a uniform ball draw.
    const std::size_t d = center_.size();
    Tensor g({d});
    for (std::size_t i = 0; i < d; ++i) g[i] = rng.next_gaussian();
    const double nrm = norm2(g);
    const double r = radius_ * std::pow(rng.next_double(), 1.0 / static_cast<double>(d));
    Tensor x = center_;
    if (nrm > 0.0) x.add_scaled(g, r / nrm);
    return x;
  }

  std::string describe() const override {
    return "ball_l2(dim=" + std::to_string(center_.size()) +
           ", radius=" + std::to_string(radius_) + ")";
  }

 private:
  Tensor center_;
  double radius_;
};

class SpectralBallSet final : public FeasibleSet {
 public:
  SpectralBallSet(std::size_t dim, double radius) : dim_(dim), radius_(radius) {
    if (dim_ == 0) throw std::invalid_argument("spectral ball dimension must be positive");
    if (radius_ <= 0.0) throw std::invalid_argument("spectral ball radius must be positive");
  }

  std::vector<std::size_t> ambient_shape() const override { return {dim_, dim_}; }

  double diameter() const override {
    return 2.0 * radius_ * std::sqrt(static_cast<double>(dim_));
  }

  // argmin <D, X> over sigma_max(X) <= r is -r * U V^T for D = U S V^T.
  LmoResult linear_minimize(const Tensor& direction) const override {
    require_shape(direction, "lmo direction");
    const Eigen::MatrixXd d = to_eigen(direction);
    if (d.norm() == 0.0) {
      Tensor zero({dim_, dim_});
      return {std::move(zero), 0.0};
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(d, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::MatrixXd v = -radius_ * (svd.matrixU() * svd.matrixV().transpose());
    Tensor vertex = from_eigen(v);
    const double obj = inner_product(direction, vertex);
    return {std::move(vertex), obj};
  }

  // Euclidean projection clips singular values at the radius.
  Tensor project(const Tensor& point) const override {
    require_shape(point, "projection point");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(point),
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::VectorXd s = svd.singularValues();
    bool changed = false;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s(i) > radius_) {
        s(i) = radius_;
        changed = true;
      }
    }
    if (!changed) return point;
    return from_eigen(svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose());
  }

  std::string membership_violation(const Tensor& point, double tol) const override {
    require_shape(point, "membership point");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(point));
    const double smax = svd.singularValues()(0);
    if (smax > radius_ + tol) {
      std::ostringstream os;
      os << "spectral norm " << smax << " > radius " << radius_;
      return os.str();
    }
    return {};
  }

  Tensor sample_point(SplitMix64& rng) const override {
    Eigen::MatrixXd g(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) g(i, j) = rng.next_gaussian();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
    const double smax = svd.singularValues()(0);
    const double scale = smax > 0.0 ? radius_ * rng.next_double() / smax : 0.0;
    return from_eigen(scale * g);
  }

  std::string describe() const override {
    return "spectral_ball(dim=" + std::to_string(dim_) +
           ", radius=" + std::to_string(radius_) + ")";
  }

 private:
  std::size_t dim_;
  double radius_;
};

class BirkhoffSet final : public FeasibleSet {
 public:
  BirkhoffSet(std::size_t n, int sweeps) : n_(n), sweeps_(sweeps) {
    if (n_ == 0) throw std::invalid_argument("birkhoff order must be positive");
    if (sweeps_ <= 0) throw std::invalid_argument("birkhoff projection sweeps must be positive");
  }

  std::vector<std::size_t> ambient_shape() const override { return {n_, n_}; }

  double diameter() const override {
    // Two permutation matrices differing in every row: ||P - Q||_F^2 = 2n.
    return n_ > 1 ? std::sqrt(2.0 * static_cast<double>(n_)) : 0.0;
  }

  LmoResult linear_minimize(const Tensor& direction) const override {
    require_shape(direction, "lmo direction");
    Assignment a = solve_lap(direction);
    Tensor vertex = permutation_matrix(a.row_to_col);
    return {std::move(vertex), a.cost};
  }

  // Dykstra's alternating projections between {X1 = 1, X^T 1 = 1} and the
  // nonnegative orthant; only the orthant step carries a correction because
  // the other set is affine. The affine step has the closed form
  // X + (1-r)1^T/n + 1(1-c)^T/n + (s-n)J/n^2 with r, c the row/column sums
  // and s the total mass. Ends on the orthant, so entries are exactly
  // nonnegative and the sum residuals shrink with the sweep count.
  Tensor project(const Tensor& point) const override {
    require_shape(point, "projection point");
    const double n = static_cast<double>(n_);
    Tensor x = point;
    Tensor correction({n_, n_});
    for (int sweep = 0; sweep < sweeps_; ++sweep) {
      std::vector<double> rowsum(n_, 0.0), colsum(n_, 0.0);
      double total = 0.0;
      for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
          const double v = x.at(i, j);
          rowsum[i] += v;
          colsum[j] += v;
          total += v;
        }
      }
      const double shift = (total - n) / (n * n);
      std::vector<double> rowres(n_, -1.0), colres(n_, -1.0);
      for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
          const double affine =
              x.at(i, j) + (1.0 - rowsum[i]) / n + (1.0 - colsum[j]) / n + shift;
          const double z = affine + correction.at(i, j);
          const double clamped = z > 0.0 ? z : 0.0;
          correction.at(i, j) = z - clamped;
          x.at(i, j) = clamped;
          rowres[i] += clamped;
          colres[j] += clamped;
        }
      }
      double residual = 0.0;
      for (std::size_t i = 0; i < n_; ++i) {
        residual = std::max(residual, std::abs(rowres[i]));
        residual = std::max(residual, std::abs(colres[i]));
      }
      if (residual <= 1e-13) break;
    }
    return x;
  }

  std::string membership_violation(const Tensor& point, double tol) const override {
    require_shape(point, "membership point");
    for (std::size_t i = 0; i < n_; ++i) {
      double rowsum = 0.0, colsum = 0.0;
      for (std::size_t j = 0; j < n_; ++j) {
        if (point.at(i, j) < -tol) {
          std::ostringstream os;
          os << "doubly stochastic entry (" << i << ", " << j << ") is negative ("
             << point.at(i, j) << ")";
          return os.str();
        }
        rowsum += point.at(i, j);
        colsum += point.at(j, i);
      }
      if (std::abs(rowsum - 1.0) > tol) {
        std::ostringstream os;
        os << "row " << i << " sums to " << rowsum << ", expected 1";
        return os.str();
      }
      if (std::abs(colsum - 1.0) > tol) {
        std::ostringstream os;
        os << "column " << i << " sums to " << colsum << ", expected 1";
        return os.str();
      }
    }
    return {};
  }

  // Random convex combination of random permutation matrices: exactly doubly
  // stochastic, no projection error.
  Tensor sample_point(SplitMix64& rng) const override {
    const int terms = 4;
    Tensor x({n_, n_});
    double wsum = 0.0;
    std::vector<double> w(terms);
    for (int t = 0; t < terms; ++t) {
      w[t] = rng.next_double() + 1e-3;
      wsum += w[t];
    }
    std::vector<int> perm(n_);
    for (int t = 0; t < terms; ++t) {
      std::iota(perm.begin(), perm.end(), 0);
      for (std::size_t i = n_ - 1; i > 0; --i) {
        const std::size_t j = rng.next_below(i + 1);
        std::swap(perm[i], perm[j]);
      }
      const double weight = w[t] / wsum;
      for (std::size_t i = 0; i < n_; ++i) x.at(i, perm[i]) += weight;
    }
    return x;
  }

  std::string describe() const override { return "birkhoff(" + std::to_string(n_) + ")"; }

 private:
  std::size_t n_;
  int sweeps_;
};

}  // namespace

SetPtr make_simplex(std::size_t dim) { return std::make_shared<SimplexSet>(dim); }

SetPtr make_box_linf(Tensor center, double radius) {
  return std::make_shared<BoxLinfSet>(std::move(center), radius);
}

SetPtr make_box_linf(std::size_t dim, double radius) {
  return std::make_shared<BoxLinfSet>(Tensor({dim}), radius);
}

SetPtr make_ball_l2(Tensor center, double radius) {
  return std::make_shared<BallL2Set>(std::move(center), radius);
}

SetPtr make_ball_l2(std::size_t dim, double radius) {
  return std::make_shared<BallL2Set>(Tensor({dim}), radius);
}

SetPtr make_spectral_ball(std::size_t dim, double radius) {
  return std::make_shared<SpectralBallSet>(dim, radius);
}

SetPtr make_birkhoff(std::size_t n, int sweeps) {
  return std::make_shared<BirkhoffSet>(n, sweeps);
}

}  // namespace dcfw

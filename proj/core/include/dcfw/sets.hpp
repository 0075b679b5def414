// Feasible sets exposed through linear-minimization, projection, diameter,
// membership, and sampling oracles. Solvers only ever touch these interfaces,
// so a new set kind plugs in without touching solver code.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dcfw/rng.hpp"
#include "dcfw/tensor.hpp"

namespace dcfw {

struct LmoResult {
  Tensor vertex;
  double objective_value = 0.0;  // <direction, vertex>
};

class FeasibleSet {
 public:
  virtual ~FeasibleSet() = default;

  virtual std::vector<std::size_t> ambient_shape() const = 0;

  // Euclidean (Frobenius for matrix sets) diameter, exact closed form.
  virtual double diameter() const = 0;

  // Strong-convexity modulus of the set; 0 when the set is not strongly convex.
  virtual double strong_convexity() const { return 0.0; }

  // argmin over the set of <direction, x>. Ties broken deterministically.
  virtual LmoResult linear_minimize(const Tensor& direction) const = 0;

  // Euclidean projection where an exact routine exists. The Birkhoff set uses
  // Dykstra's scheme and is Euclidean only up to the sweep budget.
  virtual Tensor project(const Tensor& point) const = 0;

  // Empty string when point is a member within tol, otherwise a description
  // of the violated constraint.
  virtual std::string membership_violation(const Tensor& point, double tol) const = 0;

  bool contains(const Tensor& point, double tol = 1e-9) const {
    return membership_violation(point, tol).empty();
  }

  // Random member of the set, exact up to floating point.
  virtual Tensor sample_point(SplitMix64& rng) const = 0;

  virtual std::string describe() const = 0;

 protected:
  void require_shape(const Tensor& t, const char* what) const;
};

using SetPtr = std::shared_ptr<const FeasibleSet>;

// Unit simplex {x >= 0, sum x = 1} in R^dim. Diameter sqrt(2).
SetPtr make_simplex(std::size_t dim);

// {x : |x_i - center_i| <= radius}. Diameter 2 * radius * sqrt(dim).
SetPtr make_box_linf(Tensor center, double radius);
SetPtr make_box_linf(std::size_t dim, double radius);  // centered at the origin

// {x : ||x - center||_2 <= radius}. Diameter 2 * radius; strongly convex with
// modulus 1 / radius.
SetPtr make_ball_l2(Tensor center, double radius);
SetPtr make_ball_l2(std::size_t dim, double radius);  // centered at the origin

// {X in R^{dim x dim} : sigma_max(X) <= radius}. Frobenius diameter
// 2 * radius * sqrt(dim).
SetPtr make_spectral_ball(std::size_t dim, double radius);

// Doubly stochastic matrices of order n. Diameter sqrt(2n). LMO solves an
// exact assignment problem; project runs up to `sweeps` rounds of Dykstra's
// scheme between the row/column-sum affine subspace and the nonnegative
// orthant, which converges to the Euclidean projection.
SetPtr make_birkhoff(std::size_t n, int sweeps = 1000);

}  // namespace dcfw

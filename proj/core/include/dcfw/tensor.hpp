// Dense row-major tensor of doubles. Every constructed tensor is finite
// entry-wise; arithmetic that would introduce NaN or Inf throws instead of
// propagating, so solver loops fail loudly on numerical blowup.
#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace dcfw {

class Tensor {
 public:
  Tensor() = default;

  // Zero-filled tensor of the given shape.
  explicit Tensor(std::vector<std::size_t> shape);

  // Takes ownership of data; product(shape) must equal data.size().
  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  static Tensor from_vector(std::vector<double> values);
  static Tensor from_matrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  static Tensor zeros_like(const Tensor& other);

  std::size_t size() const { return data_.size(); }
  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t rows() const;  // rank-2 only
  std::size_t cols() const;  // rank-2 only

  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double at(std::size_t r, std::size_t c) const;   // rank-2 only
  double& at(std::size_t r, std::size_t c);        // rank-2 only

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  // In-place x += alpha * d. Validates finiteness of the result.
  Tensor& add_scaled(const Tensor& d, double alpha);
  Tensor& operator*=(double alpha);

  // Throws std::invalid_argument naming the first non-finite entry.
  void check_finite() const;

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  std::string shape_string() const;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

Tensor operator+(const Tensor& a, const Tensor& b);
Tensor operator-(const Tensor& a, const Tensor& b);
Tensor operator*(double alpha, const Tensor& a);

// Euclidean inner product; shapes must match exactly.
double inner_product(const Tensor& a, const Tensor& b);

double norm2(const Tensor& a);
double norm2_squared(const Tensor& a);

// Rank-2 helpers.
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);
Tensor identity_matrix(std::size_t n);

}  // namespace dcfw

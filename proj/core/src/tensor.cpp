#include "dcfw/tensor.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dcfw {

namespace {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
  std::size_t p = 1;
  for (std::size_t s : shape) p *= s;
  return p;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(shape_product(shape_), 0.0) {
  if (shape_.empty()) throw std::invalid_argument("tensor shape must be non-empty");
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_.empty()) throw std::invalid_argument("tensor shape must be non-empty");
  if (shape_product(shape_) != data_.size()) {
    throw std::invalid_argument("tensor data length does not match shape product");
  }
  check_finite();
}

Tensor Tensor::from_vector(std::vector<double> values) {
  const std::size_t n = values.size();
  return Tensor({n}, std::move(values));
}

Tensor Tensor::from_matrix(std::size_t rows, std::size_t cols, std::vector<double> values) {
  return Tensor({rows, cols}, std::move(values));
}

Tensor Tensor::zeros_like(const Tensor& other) { return Tensor(other.shape_); }

std::size_t Tensor::rows() const {
  if (rank() != 2) throw std::invalid_argument("rows() requires a rank-2 tensor");
  return shape_[0];
}

std::size_t Tensor::cols() const {
  if (rank() != 2) throw std::invalid_argument("cols() requires a rank-2 tensor");
  return shape_[1];
}

double Tensor::at(std::size_t r, std::size_t c) const {
  return data_[r * cols() + c];
}

double& Tensor::at(std::size_t r, std::size_t c) {
  return data_[r * cols() + c];
}

Tensor& Tensor::add_scaled(const Tensor& d, double alpha) {
  if (!same_shape(d)) throw std::invalid_argument("add_scaled shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += alpha * d.data_[i];
  check_finite();
  return *this;
}

Tensor& Tensor::operator*=(double alpha) {
  for (double& v : data_) v *= alpha;
  check_finite();
  return *this;
}

void Tensor::check_finite() const {
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      std::ostringstream os;
      os << "non-finite tensor entry at flat index " << i << " (shape " << shape_string() << ")";
      throw std::invalid_argument(os.str());
    }
  }
}

std::string Tensor::shape_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (i) os << ", ";
    os << shape_[i];
  }
  os << "]";
  return os.str();
}

Tensor operator+(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("operator+ shape mismatch");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return Tensor(a.shape(), std::move(out));
}

Tensor operator-(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("operator- shape mismatch");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return Tensor(a.shape(), std::move(out));
}

Tensor operator*(double alpha, const Tensor& a) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = alpha * a[i];
  return Tensor(a.shape(), std::move(out));
}

double inner_product(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument("inner_product shape mismatch: " + a.shape_string() +
                                " vs " + b.shape_string());
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2_squared(const Tensor& a) { return inner_product(a, a); }

double norm2(const Tensor& a) { return std::sqrt(norm2_squared(a)); }

Tensor matmul(const Tensor& a, const Tensor& b) {
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  if (b.rows() != k) throw std::invalid_argument("matmul inner dimension mismatch");
  std::vector<double> out(m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t l = 0; l < k; ++l) {
      const double ail = a[i * k + l];
      if (ail == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] += ail * b[l * n + j];
    }
  }
  return Tensor({m, n}, std::move(out));
}

Tensor transpose(const Tensor& a) {
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<double> out(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[j * m + i] = a[i * n + j];
  return Tensor({n, m}, std::move(out));
}

Tensor identity_matrix(std::size_t n) {
  Tensor t({n, n});
  for (std::size_t i = 0; i < n; ++i) t.at(i, i) = 1.0;
  return t;
}

}  // namespace dcfw

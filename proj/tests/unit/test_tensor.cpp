#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "dcfw/tensor.hpp"
#include "helpers.hpp"

using dcfw::Tensor;

TEST_CASE("shape construction and flat indexing") {
  Tensor t({2, 3});
  CHECK(t.size() == 6);
  CHECK(t.rows() == 2);
  CHECK(t.cols() == 3);
  CHECK(t.rank() == 2);
  for (std::size_t i = 0; i < 6; ++i) CHECK(t[i] == 0.0);
  t.at(1, 2) = 5.0;
  CHECK(t[5] == 5.0);  // row-major: (1,2) is the last slot
}

TEST_CASE("ownership constructor validates element count") {
  CHECK_THROWS_AS(Tensor({2, 2}, {1.0, 2.0, 3.0}), std::invalid_argument);
  const Tensor t({2, 2}, {1.0, 2.0, 3.0, 4.0});
  CHECK(t.at(0, 1) == 2.0);
  CHECK(t.at(1, 0) == 3.0);
}

TEST_CASE("non-finite data is rejected at construction and after arithmetic") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(Tensor({2}, {1.0, inf}), std::invalid_argument);
  CHECK_THROWS_AS(Tensor::from_vector({std::nan("")}), std::invalid_argument);

  Tensor a = Tensor::from_vector({1e308, 1e308});
  CHECK_THROWS_AS(a.add_scaled(a, 1.0), std::invalid_argument);  // overflow to inf
  Tensor b = Tensor::from_vector({1.0, 2.0});
  CHECK_THROWS_AS(b *= inf, std::invalid_argument);
}

TEST_CASE("arithmetic identities on random data") {
  dcfw::SplitMix64 rng(7);
  const Tensor a = testing::rand_tensor({3, 4}, rng);
  const Tensor b = testing::rand_tensor({3, 4}, rng);

  const Tensor sum = a + b;
  const Tensor diff = a - b;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(sum[i] == doctest::Approx(a[i] + b[i]).epsilon(1e-15));
    CHECK(diff[i] == doctest::Approx(a[i] - b[i]).epsilon(1e-15));
  }

  Tensor c = a;
  c.add_scaled(b, -2.5);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(c[i] == doctest::Approx(a[i] - 2.5 * b[i]).epsilon(1e-14));
  }

  // <a, b> agrees with the naive accumulation and norms are consistent.
  double ip = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) ip += a[i] * b[i];
  CHECK(dcfw::inner_product(a, b) == doctest::Approx(ip).epsilon(1e-13));
  CHECK(dcfw::norm2_squared(a) == doctest::Approx(dcfw::inner_product(a, a)).epsilon(1e-13));
  CHECK(dcfw::norm2(a) == doctest::Approx(std::sqrt(dcfw::norm2_squared(a))).epsilon(1e-13));
}

TEST_CASE("shape mismatches throw") {
  const Tensor a({2, 2});
  const Tensor b({4});
  CHECK_THROWS_AS((void)(a + b), std::invalid_argument);
  CHECK_THROWS_AS((void)dcfw::inner_product(a, b), std::invalid_argument);
}

TEST_CASE("matmul against a hand-computed product") {
  // [1 2; 3 4] * [5 6; 7 8] = [19 22; 43 50]
  const Tensor a = Tensor::from_matrix(2, 2, {1, 2, 3, 4});
  const Tensor b = Tensor::from_matrix(2, 2, {5, 6, 7, 8});
  const Tensor p = dcfw::matmul(a, b);
  CHECK(p.at(0, 0) == 19.0);
  CHECK(p.at(0, 1) == 22.0);
  CHECK(p.at(1, 0) == 43.0);
  CHECK(p.at(1, 1) == 50.0);
}

TEST_CASE("matmul distributes and transposition reverses order") {
  dcfw::SplitMix64 rng(11);
  const Tensor a = testing::rand_tensor({3, 5}, rng);
  const Tensor b = testing::rand_tensor({5, 2}, rng);
  const Tensor c = testing::rand_tensor({5, 2}, rng);

  const Tensor lhs = dcfw::matmul(a, b + c);
  const Tensor rhs = dcfw::matmul(a, b) + dcfw::matmul(a, c);
  CHECK(testing::max_abs_diff(lhs, rhs) < 1e-12);

  const Tensor t1 = dcfw::transpose(dcfw::matmul(a, b));
  const Tensor t2 = dcfw::matmul(dcfw::transpose(b), dcfw::transpose(a));
  CHECK(testing::max_abs_diff(t1, t2) < 1e-12);

  const Tensor id = dcfw::identity_matrix(3);
  CHECK(testing::max_abs_diff(dcfw::matmul(id, a), a) == 0.0);
}

TEST_CASE("rank guards on matrix-only accessors") {
  const Tensor v({4});
  CHECK_THROWS_AS((void)v.rows(), std::invalid_argument);
  CHECK_THROWS_AS((void)v.at(0, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)dcfw::transpose(v), std::invalid_argument);
}

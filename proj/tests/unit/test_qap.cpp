#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "dcfw/decompositions.hpp"
#include "dcfw/lap.hpp"
#include "dcfw/qap.hpp"
#include "dcfw/sets.hpp"
#include "helpers.hpp"

using dcfw::QapInstance;
using dcfw::Tensor;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const std::string kDataDir = DCFW_TEST_DATA_DIR;

}  // namespace

TEST_CASE("parses the catalog format") {
  const QapInstance inst = dcfw::parse_qaplib(slurp(kDataDir + "/synth4.dat"));
  CHECK(inst.n == 4);
  CHECK(inst.a.at(0, 1) == 6.0);
  CHECK(inst.a.at(3, 2) == 1.0);
  CHECK(inst.b.at(0, 3) == 4.0);
  CHECK(inst.b.at(2, 1) == 5.0);
  CHECK_FALSE(inst.best_known.has_value());
}

TEST_CASE("serialization round-trips through the parser") {
  dcfw::SplitMix64 rng(700);
  QapInstance inst;
  inst.n = 5;
  inst.a = testing::rand_uniform_tensor({5, 5}, rng, 0.0, 9.0);
  inst.b = testing::rand_uniform_tensor({5, 5}, rng, 0.0, 9.0);
  const QapInstance back = dcfw::parse_qaplib(dcfw::serialize_qaplib(inst));
  CHECK(back.n == 5);
  CHECK(testing::max_abs_diff(back.a, inst.a) == 0.0);
  CHECK(testing::max_abs_diff(back.b, inst.b) == 0.0);
}

TEST_CASE("malformed inputs are rejected with specific messages") {
  CHECK_THROWS_AS(dcfw::parse_qaplib(""), std::invalid_argument);
  CHECK_THROWS_AS(dcfw::parse_qaplib("1\n\n0\n\n0\n"), std::invalid_argument);  // n < 2
  CHECK_THROWS_AS(dcfw::parse_qaplib("2\n\n0 1 1 0\n\n0 1 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(dcfw::parse_qaplib("2\n\n0 1 1 0\n\n0 1 1 x\n"), std::invalid_argument);
  CHECK_THROWS_AS(dcfw::parse_qaplib("2.5\n\n0 1 1 0\n\n0 1 1 0\n"), std::invalid_argument);

  try {
    dcfw::parse_qaplib("3\n\n0 1\n");
    FAIL("expected a throw");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("19") != std::string::npos);  // expected token count 1 + 2 n^2
  }
}

TEST_CASE("pairing cost evaluates the permutation on hand examples") {
  // a_{ij} b_{p(i) p(j)} summed over ordered pairs.
  const Tensor a = Tensor::from_matrix(2, 2, {0, 3, 4, 0});
  const Tensor b = Tensor::from_matrix(2, 2, {0, 5, 2, 0});
  CHECK(dcfw::qap_pairing_cost(a, b, {0, 1}) == 3 * 5 + 4 * 2);
  CHECK(dcfw::qap_pairing_cost(a, b, {1, 0}) == 3 * 2 + 4 * 5);
  CHECK_THROWS_AS(dcfw::qap_pairing_cost(a, b, {0, 5}), std::invalid_argument);
}

TEST_CASE("exhaustive solver agrees with direct enumeration") {
  const QapInstance inst = dcfw::parse_qaplib(slurp(kDataDir + "/synth4.dat"));
  const dcfw::Assignment best = dcfw::qap_brute_force(inst.a, inst.b);

  std::vector<int> perm = {0, 1, 2, 3};
  double expect = 1e300;
  do {
    expect = std::min(expect, dcfw::qap_pairing_cost(inst.a, inst.b, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(best.cost == doctest::Approx(expect));
  CHECK(dcfw::qap_pairing_cost(inst.a, inst.b, best.row_to_col) == doctest::Approx(expect));

  Tensor big({10, 10});
  CHECK_THROWS_AS(dcfw::qap_brute_force(big, big), std::invalid_argument);
}

TEST_CASE("relaxation value at a permutation matrix matches the transposed pairing cost") {
  // phi(P) = <A^T P, P B> places A's row index on P's row, so it equals the
  // pairing cost of (A^T, B) under the permutation.
  dcfw::SplitMix64 rng(701);
  const std::size_t n = 5;
  const Tensor a = testing::rand_tensor({n, n}, rng);
  const Tensor b = testing::rand_tensor({n, n}, rng);
  const dcfw::PhiOracles phi = dcfw::qap_objective(a, b);

  std::vector<int> perm = {2, 0, 4, 1, 3};
  const Tensor p = dcfw::permutation_matrix(perm);
  CHECK(phi.value(p) ==
        doctest::Approx(dcfw::qap_pairing_cost(dcfw::transpose(a), b, perm)).epsilon(1e-10));
}

TEST_CASE("initial points are feasible and deterministic per seed") {
  const auto set = dcfw::make_birkhoff(6);
  const Tensor x1 = dcfw::qap_init_point(6, 42);
  const Tensor x2 = dcfw::qap_init_point(6, 42);
  const Tensor x3 = dcfw::qap_init_point(6, 43);
  CHECK(set->membership_violation(x1, 1e-7).empty());
  CHECK(testing::max_abs_diff(x1, x2) == 0.0);
  CHECK(testing::max_abs_diff(x1, x3) > 1e-3);
}

TEST_CASE("relative error helper") {
  CHECK(dcfw::assignment_error(110.0, 100.0) == doctest::Approx(0.1));
  CHECK(dcfw::assignment_error(100.0, 100.0) == 0.0);
  CHECK(dcfw::assignment_error(0.5, 0.0) == doctest::Approx(0.5));  // guard divisor
}

TEST_CASE("relax-and-round produces a permutation no worse than random") {
  const QapInstance inst = dcfw::parse_qaplib(slurp(kDataDir + "/synth8.dat"));

  dcfw::QapRunConfig cfg;
  cfg.seed = 3;
  cfg.dcfw.tolerance = dcfw::ToleranceRule::adaptive(0.8);
  cfg.dcfw.max_outer = 40;
  cfg.dcfw.max_inner = 4000;

  const dcfw::QapRunResult run = dcfw::relax_and_round(inst, dcfw::QapSolver::DcfwV1, cfg);

  std::set<int> cols(run.assignment.row_to_col.begin(), run.assignment.row_to_col.end());
  CHECK(cols.size() == inst.n);

  // Reported rounded value is the relaxation objective at the rounded vertex.
  const dcfw::PhiOracles phi = dcfw::qap_objective(inst.a, inst.b);
  const Tensor vertex = dcfw::permutation_matrix(run.assignment.row_to_col);
  CHECK(run.phi_rounded == doctest::Approx(phi.value(vertex)).epsilon(1e-12));

  // Against the catalog-convention optimum.
  const double optimum = dcfw::qap_brute_force(inst.a, inst.b).cost;
  const double cost = dcfw::qap_pairing_cost(inst.a, inst.b, run.assignment.row_to_col);
  CHECK(cost >= optimum - 1e-9);

  // Averaged over the enumerable vertex set, random assignments are worse.
  dcfw::SplitMix64 rng(702);
  double random_total = 0.0;
  const int trials = 200;
  std::vector<int> perm(inst.n);
  for (int t = 0; t < trials; ++t) {
    for (std::size_t i = 0; i < inst.n; ++i) perm[i] = static_cast<int>(i);
    for (std::size_t i = inst.n; i > 1; --i) {
      std::swap(perm[i - 1], perm[rng.next_below(i)]);
    }
    random_total += dcfw::qap_pairing_cost(inst.a, inst.b, perm);
  }
  CHECK(cost <= random_total / trials);
}

TEST_CASE("baseline solver route works end to end") {
  const QapInstance inst = dcfw::parse_qaplib(slurp(kDataDir + "/synth4.dat"));
  dcfw::QapRunConfig cfg;
  cfg.seed = 1;
  cfg.baseline.max_steps = 2000;
  const dcfw::QapRunResult run = dcfw::relax_and_round(inst, dcfw::QapSolver::Fw, cfg);
  CHECK(run.solve.counters.subgrad_g_calls == 0);
  CHECK(run.solve.counters.lmo_calls > 0);
  std::set<int> cols(run.assignment.row_to_col.begin(), run.assignment.row_to_col.end());
  CHECK(cols.size() == inst.n);
}

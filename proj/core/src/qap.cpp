#include "dcfw/qap.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "dcfw/csv.hpp"
#include "dcfw/decompositions.hpp"
#include "dcfw/rng.hpp"

namespace dcfw {

namespace {

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
      if (!cur.empty()) {
        tokens.push_back(std::move(cur));
        cur.clear();
      }
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

double parse_number(const std::string& token, std::size_t index) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + token.size()) {
    throw std::invalid_argument("QAPLIB parse: token " + std::to_string(index) + " ('" + token +
                                "') is not numeric");
  }
  return v;
}

}  // namespace

QapInstance parse_qaplib(const std::string& text) {
  const std::vector<std::string> tokens = tokenize(text);
  if (tokens.empty()) throw std::invalid_argument("QAPLIB parse: empty input");

  const double n_value = parse_number(tokens[0], 0);
  const auto n = static_cast<std::size_t>(n_value);
  if (n_value != static_cast<double>(n) || n < 2) {
    throw std::invalid_argument("QAPLIB parse: order must be an integer >= 2, got '" + tokens[0] +
                                "'");
  }
  const std::size_t expected = 1 + 2 * n * n;
  if (tokens.size() != expected) {
    throw std::invalid_argument("QAPLIB parse: expected " + std::to_string(expected) +
                                " tokens for order " + std::to_string(n) + ", found " +
                                std::to_string(tokens.size()));
  }

  std::vector<double> a(n * n), b(n * n);
  for (std::size_t i = 0; i < n * n; ++i) a[i] = parse_number(tokens[1 + i], 1 + i);
  for (std::size_t i = 0; i < n * n; ++i) {
    b[i] = parse_number(tokens[1 + n * n + i], 1 + n * n + i);
  }

  QapInstance inst;
  inst.n = n;
  inst.a = Tensor::from_matrix(n, n, std::move(a));
  inst.b = Tensor::from_matrix(n, n, std::move(b));
  return inst;
}

std::string serialize_qaplib(const QapInstance& inst) {
  if (inst.n < 2 || inst.a.rank() != 2 || inst.a.rows() != inst.n || inst.a.cols() != inst.n ||
      !inst.a.same_shape(inst.b)) {
    throw std::invalid_argument("serialize_qaplib: instance matrices must be n x n with n >= 2");
  }
  std::string out = std::to_string(inst.n) + "\n\n";
  const auto write_matrix = [&](const Tensor& m) {
    for (std::size_t r = 0; r < inst.n; ++r) {
      for (std::size_t c = 0; c < inst.n; ++c) {
        if (c > 0) out.push_back(' ');
        out += format_double(m.at(r, c));
      }
      out.push_back('\n');
    }
  };
  write_matrix(inst.a);
  out.push_back('\n');
  write_matrix(inst.b);
  return out;
}

Tensor qap_init_point(std::size_t n, std::uint64_t seed, std::size_t sweeps) {
  if (n < 2) throw std::invalid_argument("qap_init_point: n must be >= 2");
  SplitMix64 rng(seed);
  Tensor x({n, n});
  const double base = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = base + rng.next_gaussian();
  return make_birkhoff(n, sweeps)->project(x);
}

double qap_pairing_cost(const Tensor& a, const Tensor& b, const std::vector<int>& perm) {
  const std::size_t n = perm.size();
  if (a.rank() != 2 || a.rows() != n || a.cols() != n || !a.same_shape(b)) {
    throw std::invalid_argument("qap_pairing_cost: matrices must match the permutation length");
  }
  for (int p : perm) {
    if (p < 0 || static_cast<std::size_t>(p) >= n) {
      throw std::invalid_argument("qap_pairing_cost: permutation entry out of range");
    }
  }
  double cost = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cost += a.at(i, j) * b.at(static_cast<std::size_t>(perm[i]),
                                static_cast<std::size_t>(perm[j]));
    }
  }
  return cost;
}

Assignment qap_brute_force(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || a.rows() != a.cols() || !a.same_shape(b)) {
    throw std::invalid_argument("qap_brute_force: matrices must be square and equal-shaped");
  }
  const std::size_t n = a.rows();
  if (n > 9) throw std::invalid_argument("qap_brute_force: limited to n <= 9");

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Assignment best;
  best.row_to_col = perm;
  best.cost = qap_pairing_cost(a, b, perm);
  while (std::next_permutation(perm.begin(), perm.end())) {
    const double cost = qap_pairing_cost(a, b, perm);
    if (cost < best.cost) {
      best.cost = cost;
      best.row_to_col = perm;
    }
  }
  return best;
}

double assignment_error(double phi_rounded, double phi_best) {
  return (phi_rounded - phi_best) / std::max(phi_best, 1.0);
}

QapRunResult relax_and_round(const QapInstance& inst, QapSolver solver, const QapRunConfig& cfg) {
  if (inst.n < 2 || inst.a.rank() != 2 || inst.a.rows() != inst.n || inst.a.cols() != inst.n ||
      !inst.a.same_shape(inst.b)) {
    throw std::invalid_argument("relax_and_round: malformed instance");
  }

  const Tensor x0 = qap_init_point(inst.n, cfg.seed);
  const PhiOracles phi = qap_objective(inst.a, inst.b);

  QapRunResult out;
  if (solver == QapSolver::Fw) {
    BaselineConfig bcfg = cfg.baseline;
    if (bcfg.smoothness <= 0.0) {
      bcfg.smoothness = 2.0 * spectral_norm(inst.a) * spectral_norm(inst.b);
    }
    out.solve = fw_nonconvex(phi, make_birkhoff(inst.n), x0, bcfg);
  } else {
    QapSpec spec;
    spec.variant = solver == QapSolver::DcfwV1 ? 1 : (solver == QapSolver::DcfwV2 ? 2 : 3);
    spec.a = inst.a;
    spec.b = inst.b;
    const DcProblem problem = build(spec);
    out.solve = dcfw_solve(problem, x0, cfg.dcfw);
  }

  out.phi_relaxed = phi.value(out.solve.x_final);
  out.assignment = round_to_permutation(out.solve.x_final);
  out.phi_rounded = phi.value(permutation_matrix(out.assignment.row_to_col));
  return out;
}

}  // namespace dcfw

#include "dcfw/decompositions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <type_traits>
#include <utility>

#include "dcfw/rng.hpp"

namespace dcfw {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double half_sqnorm(const Tensor& x) { return 0.5 * norm2_squared(x); }

Tensor scaled(const Tensor& x, double alpha) {
  Tensor y = x;
  y *= alpha;
  return y;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

void require_square_pair(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.rows() != a.cols() || b.rows() != b.cols() ||
      a.rows() != b.rows()) {
    throw std::invalid_argument("quadratic assignment needs square A and B of equal order, got " +
                                a.shape_string() + " and " + b.shape_string());
  }
}

// Surrogate line search shared by every split with f = (c/2)||x||^2:
// minimizes (c/2)||x + eta d||^2 - <u, x + eta d> over eta.
double quadratic_f_linesearch(double c, const Tensor& x, const Tensor& d, const Tensor& u) {
  const double dd = norm2_squared(d);
  if (dd == 0.0) return 0.0;
  const double eta = (inner_product(u, d) - c * inner_product(x, d)) / (c * dd);
  return std::clamp(eta, 0.0, 1.0);
}

DcProblem build_direct(const DirectSpec& s) {
  DcProblem p;
  p.eval_f = s.eval_f;
  p.grad_f = s.grad_f;
  p.eval_g = s.eval_g;
  p.subgrad_g = s.subgrad_g;
  p.smoothness_f = s.smoothness_f;
  p.strong_convexity_f = s.strong_convexity_f;
  p.set = s.set;
  p.exact_linesearch = s.exact_linesearch;
  p.structure = DcStructure::General;
  return p;
}

// f = (c/2)||x||^2, g = f - phi; shared by the smooth and weakly convex
// gradient-style splits.
DcProblem build_quadratic_pgm(const PhiOracles& phi, double c, SetPtr set, const char* cname) {
  require_positive(c, cname);
  if (!phi.value || !phi.gradient) {
    throw std::invalid_argument("pgm split needs phi value and gradient oracles");
  }
  DcProblem p;
  p.eval_f = [c](const Tensor& x) { return c * half_sqnorm(x); };
  p.grad_f = [c](const Tensor& x) { return scaled(x, c); };
  p.eval_g = [c, phi](const Tensor& x) { return c * half_sqnorm(x) - phi.value(x); };
  p.subgrad_g = [c, phi](const Tensor& x) {
    Tensor y = scaled(x, c);
    y.add_scaled(phi.gradient(x), -1.0);
    return y;
  };
  p.smoothness_f = c;
  p.strong_convexity_f = c;
  p.set = std::move(set);
  p.exact_linesearch = [c](const Tensor& x, const Tensor& d, const Tensor& u) {
    return quadratic_f_linesearch(c, x, d, u);
  };
  p.structure = DcStructure::PgmSplit;
  return p;
}

DcProblem build_ppm(const PpmSpec& s) {
  require_positive(s.smoothness, "Ppm smoothness");
  if (!s.phi.value || !s.phi.gradient) {
    throw std::invalid_argument("ppm split needs phi value and gradient oracles");
  }
  const double L = s.smoothness;
  const PhiOracles phi = s.phi;
  DcProblem p;
  p.eval_f = [L, phi](const Tensor& x) { return phi.value(x) + L * half_sqnorm(x); };
  p.grad_f = [L, phi](const Tensor& x) {
    Tensor y = phi.gradient(x);
    y.add_scaled(x, L);
    return y;
  };
  p.eval_g = [L](const Tensor& x) { return L * half_sqnorm(x); };
  p.subgrad_g = [L](const Tensor& x) { return scaled(x, L); };
  p.smoothness_f = 2.0 * L;
  p.strong_convexity_f = 0.0;
  p.set = s.set;
  p.structure = DcStructure::PpmSplit;
  return p;
}

DcProblem build_composite_pgm(const CompositePgmSpec& s) {
  require_positive(s.omega, "CompositePgm omega");
  if (!s.p.value || !s.p.gradient || !s.q_value || !s.q_subgrad) {
    throw std::invalid_argument("composite split needs p and q oracles");
  }
  const double w = s.omega;
  const PhiOracles sp = s.p;
  const auto qv = s.q_value;
  const auto qs = s.q_subgrad;
  DcProblem p;
  p.eval_f = [w](const Tensor& x) { return w * half_sqnorm(x); };
  p.grad_f = [w](const Tensor& x) { return scaled(x, w); };
  p.eval_g = [w, sp, qv](const Tensor& x) { return w * half_sqnorm(x) - sp.value(x) + qv(x); };
  p.subgrad_g = [w, sp, qs](const Tensor& x) {
    Tensor y = scaled(x, w);
    y.add_scaled(sp.gradient(x), -1.0);
    y.add_scaled(qs(x), 1.0);
    return y;
  };
  p.smoothness_f = w;
  p.strong_convexity_f = w;
  p.set = s.set;
  p.exact_linesearch = [w](const Tensor& x, const Tensor& d, const Tensor& u) {
    return quadratic_f_linesearch(w, x, d, u);
  };
  p.structure = DcStructure::PgmSplit;
  return p;
}

DcProblem build_composite_ppm(const CompositePpmSpec& s) {
  require_positive(s.omega, "CompositePpm omega");
  if (!s.p.value || !s.p.gradient || !s.q_value || !s.q_subgrad) {
    throw std::invalid_argument("composite split needs p and q oracles");
  }
  const double w = s.omega;
  const PhiOracles sp = s.p;
  const auto qv = s.q_value;
  const auto qs = s.q_subgrad;
  DcProblem p;
  p.eval_f = [w, sp](const Tensor& x) { return sp.value(x) + w * half_sqnorm(x); };
  p.grad_f = [w, sp](const Tensor& x) {
    Tensor y = sp.gradient(x);
    y.add_scaled(x, w);
    return y;
  };
  p.eval_g = [w, qv](const Tensor& x) { return w * half_sqnorm(x) + qv(x); };
  p.subgrad_g = [w, qs](const Tensor& x) {
    Tensor y = scaled(x, w);
    y.add_scaled(qs(x), 1.0);
    return y;
  };
  p.smoothness_f = 2.0 * w;
  p.strong_convexity_f = 0.0;
  p.set = s.set;
  p.structure = DcStructure::General;
  return p;
}

DcProblem build_qap(const QapSpec& s) {
  require_square_pair(s.a, s.b);
  if (s.variant < 1 || s.variant > 3) {
    throw std::invalid_argument("QAP variant must be 1, 2, or 3");
  }
  const Tensor a = s.a;
  const Tensor b = s.b;
  const Tensor at = transpose(a);
  const Tensor bt = transpose(b);
  const SetPtr set = make_birkhoff(a.rows());

  if (s.variant == 1) {
    DcProblem p;
    p.eval_f = [at, b](const Tensor& x) {
      return 0.25 * norm2_squared(matmul(at, x) + matmul(x, b));
    };
    p.grad_f = [a, at, b, bt](const Tensor& x) {
      const Tensor m = matmul(at, x) + matmul(x, b);
      Tensor y = matmul(a, m);
      y.add_scaled(matmul(m, bt), 1.0);
      y *= 0.5;
      return y;
    };
    p.eval_g = [at, b](const Tensor& x) {
      return 0.25 * norm2_squared(matmul(at, x) - matmul(x, b));
    };
    p.subgrad_g = [a, at, b, bt](const Tensor& x) {
      const Tensor m = matmul(at, x) - matmul(x, b);
      Tensor y = matmul(a, m);
      y.add_scaled(matmul(m, bt), -1.0);
      y *= 0.5;
      return y;
    };
    const double sa = spectral_norm(a);
    const double sb = spectral_norm(b);
    p.smoothness_f = 0.5 * (sa + sb) * (sa + sb);
    p.strong_convexity_f = 0.0;
    p.set = set;
    p.exact_linesearch = [a, b](const Tensor& x, const Tensor& d, const Tensor& u) {
      return qap_linesearch(1, a, b, 0.0, x, d, u);
    };
    p.structure = DcStructure::General;
    return p;
  }

  const double L = s.smoothness > 0.0 ? s.smoothness : 2.0 * spectral_norm(a) * spectral_norm(b);
  const PhiOracles phi = qap_objective(a, b);

  if (s.variant == 2) {
    DcProblem p = build_quadratic_pgm(phi, L, set, "QAP smoothness");
    p.exact_linesearch = [a, b, L](const Tensor& x, const Tensor& d, const Tensor& u) {
      return qap_linesearch(2, a, b, L, x, d, u);
    };
    return p;
  }

  PpmSpec ppm;
  ppm.phi = phi;
  ppm.smoothness = L;
  ppm.set = set;
  DcProblem p = build_ppm(ppm);
  p.exact_linesearch = [a, b, L](const Tensor& x, const Tensor& d, const Tensor& u) {
    return qap_linesearch(3, a, b, L, x, d, u);
  };
  return p;
}

}  // namespace

DcProblem build(const DecompositionSpec& spec) {
  DcProblem p = std::visit(
      [](const auto& s) -> DcProblem {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, DirectSpec>) return build_direct(s);
        if constexpr (std::is_same_v<S, PgmSpec>)
          return build_quadratic_pgm(s.phi, s.smoothness, s.set, "Pgm smoothness");
        if constexpr (std::is_same_v<S, PpmSpec>) return build_ppm(s);
        if constexpr (std::is_same_v<S, WeaklyConvexPgmSpec>)
          return build_quadratic_pgm(s.phi, s.omega, s.set, "WeaklyConvexPgm omega");
        if constexpr (std::is_same_v<S, CompositePgmSpec>) return build_composite_pgm(s);
        if constexpr (std::is_same_v<S, CompositePpmSpec>) return build_composite_ppm(s);
        if constexpr (std::is_same_v<S, QapSpec>) return build_qap(s);
        throw std::logic_error("unhandled decomposition kind");
      },
      spec);
  p.validate();
  return p;
}

PhiOracles qap_objective(const Tensor& a, const Tensor& b) {
  require_square_pair(a, b);
  const Tensor at = transpose(a);
  const Tensor bt = transpose(b);
  PhiOracles phi;
  phi.value = [at, b](const Tensor& x) { return inner_product(matmul(at, x), matmul(x, b)); };
  phi.gradient = [a, at, b, bt](const Tensor& x) {
    Tensor y = matmul(matmul(a, x), b);
    y.add_scaled(matmul(matmul(at, x), bt), 1.0);
    return y;
  };
  // phi(x + eta d) = phi(x) + eta <grad(x), d> + eta^2 phi(d): pure quadratic,
  // so the segment minimizer over [0, 1] is explicit.
  phi.segment_minimizer = [at, b](const Tensor& x, const Tensor& d) {
    const double quad = inner_product(matmul(at, d), matmul(d, b));
    const double lin =
        inner_product(matmul(at, x), matmul(d, b)) + inner_product(matmul(at, d), matmul(x, b));
    if (quad > 0.0) return std::clamp(-lin / (2.0 * quad), 0.0, 1.0);
    if (quad == 0.0) return lin >= 0.0 ? 0.0 : 1.0;
    return quad + lin >= 0.0 ? 0.0 : 1.0;  // concave: best endpoint
  };
  return phi;
}

double qap_linesearch(int variant, const Tensor& a, const Tensor& b, double L, const Tensor& x,
                      const Tensor& d, const Tensor& u) {
  require_square_pair(a, b);
  if (norm2_squared(d) == 0.0) return 0.0;
  const Tensor at = transpose(a);

  if (variant == 1) {
    const Tensor n = matmul(at, d) + matmul(d, b);
    const Tensor m = matmul(at, x) + matmul(x, b);
    const double denom = norm2_squared(n);
    if (denom <= 0.0) return kNaN;
    const double eta = (2.0 * inner_product(u, d) - inner_product(m, n)) / denom;
    return std::clamp(eta, 0.0, 1.0);
  }
  if (variant == 2) {
    require_positive(L, "QAP variant 2 smoothness");
    return quadratic_f_linesearch(L, x, d, u);
  }
  if (variant == 3) {
    require_positive(L, "QAP variant 3 smoothness");
    const double quad = inner_product(matmul(at, d), matmul(d, b));
    const double denom = 2.0 * quad + L * norm2_squared(d);
    if (denom <= 0.0) return kNaN;
    const double grad_dot_d =
        inner_product(matmul(at, x), matmul(d, b)) + inner_product(matmul(at, d), matmul(x, b));
    const double eta =
        (inner_product(u, d) - grad_dot_d - L * inner_product(x, d)) / denom;
    return std::clamp(eta, 0.0, 1.0);
  }
  throw std::invalid_argument("QAP line search variant must be 1, 2, or 3");
}

double spectral_norm(const Tensor& m, int iterations) {
  if (m.rank() != 2) throw std::invalid_argument("spectral_norm expects a matrix");
  if (iterations < 1) throw std::invalid_argument("spectral_norm needs at least one iteration");
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();

  SplitMix64 rng(0x9e3779b9ULL);
  std::vector<double> v(cols);
  for (auto& vi : v) vi = rng.next_gaussian();

  std::vector<double> mv(rows);
  double sigma = 0.0;
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t r = 0; r < rows; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < cols; ++c) acc += m.at(r, c) * v[c];
      mv[r] = acc;
    }
    std::vector<double> w(cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) w[c] += m.at(r, c) * mv[r];
    }
    double nw = 0.0;
    for (double wi : w) nw += wi * wi;
    nw = std::sqrt(nw);
    if (nw == 0.0) return 0.0;  // v in the kernel; matrix may be zero
    const double next = std::sqrt(nw);
    for (std::size_t c = 0; c < cols; ++c) v[c] = w[c] / nw;
    if (it > 0 && std::abs(next - sigma) <= 1e-14 * std::max(1.0, next)) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return sigma;
}

}  // namespace dcfw

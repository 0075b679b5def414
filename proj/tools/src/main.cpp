// Command-line harness around the solver library. Subcommands run the
// quadratic-assignment pipeline, the 2-d gap-landscape grid, the embedding
// alignment experiment, and a quick micro-benchmark sweep. All numeric output
// is CSV; every run is deterministic given (config, seed) except for the
// timing columns.
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dcfw/align.hpp"
#include "dcfw/baselines.hpp"
#include "dcfw/csv.hpp"
#include "dcfw/decompositions.hpp"
#include "dcfw/gaps.hpp"
#include "dcfw/lap.hpp"
#include "dcfw/qap.hpp"
#include "dcfw/rng.hpp"
#include "dcfw/sets.hpp"
#include "dcfw/solver.hpp"

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

// Configuration and input problems; exits with code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string basename_of(const std::string& path) {
  const std::size_t pos = path.find_last_of("/\\");
  return pos == std::string::npos ? path : path.substr(pos + 1);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void emit_csv(const dcfw::CsvWriter& csv, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    csv.write_file(out_path);
  }
}

unsigned resolve_threads(int requested) {
  if (requested > 0) return static_cast<unsigned>(requested);
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs jobs [0, count) on a pool; worker exceptions are rethrown here.
void run_pool(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job) {
  const unsigned workers = static_cast<unsigned>(
      std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= count) break;
          job(i);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// ---------------------------------------------------------------------------
// JSON config merging. Precedence: command-line flag > config file > default.

class ConfigMerge {
 public:
  explicit ConfigMerge(const std::string& path) {
    if (path.empty()) return;
    const std::string text = read_file(path);
    try {
      data_ = json::parse(text);
    } catch (const json::exception& e) {
      throw UsageError("config " + path + ": " + e.what());
    }
    if (!data_.is_object()) throw UsageError("config " + path + ": top level must be an object");
    loaded_ = true;
  }

  template <typename T>
  void merge(const CLI::Option* opt, const char* key, T& target) {
    known_.insert(key);
    if (!loaded_ || (opt != nullptr && opt->count() > 0)) return;
    const auto it = data_.find(key);
    if (it == data_.end()) return;
    try {
      target = it->get<T>();
    } catch (const json::exception& e) {
      throw UsageError(std::string("config key '") + key + "': " + e.what());
    }
  }

  // Accepts either a scalar or an array for list-valued keys.
  template <typename T>
  void merge_list(const CLI::Option* opt, const char* key, std::vector<T>& target) {
    known_.insert(key);
    if (!loaded_ || (opt != nullptr && opt->count() > 0)) return;
    const auto it = data_.find(key);
    if (it == data_.end()) return;
    try {
      if (it->is_array()) {
        target = it->get<std::vector<T>>();
      } else {
        target = {it->get<T>()};
      }
    } catch (const json::exception& e) {
      throw UsageError(std::string("config key '") + key + "': " + e.what());
    }
  }

  // Every config key must have been claimed by a merge call.
  void finish() const {
    if (!loaded_) return;
    std::vector<std::string> unknown;
    for (const auto& item : data_.items()) {
      if (known_.find(item.key()) == known_.end()) unknown.push_back(item.key());
    }
    if (!unknown.empty()) {
      std::sort(unknown.begin(), unknown.end());
      std::string msg = "config: unknown keys:";
      for (const auto& k : unknown) msg += " " + k;
      throw UsageError(msg);
    }
  }

 private:
  json data_;
  bool loaded_ = false;
  std::set<std::string> known_;
};

// ---------------------------------------------------------------------------
// Shared solver options.

struct SolverOpts {
  std::vector<std::uint64_t> seeds{0};
  std::string out;
  std::string config_path;
  std::string step_size = "linesearch";
  double eps = 0.0;  // > 0 switches the outer loop to the fixed tolerance rule
  double beta = 0.8;
  int max_outer = 100;
  long long max_inner = 50000;
  double eps_final = 1e-9;
  double rel_stop_factor = 1e-3;
  int threads = 0;

  CLI::Option* seed_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* step_opt = nullptr;
  CLI::Option* eps_opt = nullptr;
  CLI::Option* beta_opt = nullptr;
  CLI::Option* max_outer_opt = nullptr;
  CLI::Option* max_inner_opt = nullptr;
  CLI::Option* threads_opt = nullptr;
};

void attach_solver_opts(CLI::App* sub, SolverOpts& o, bool with_threads) {
  o.seed_opt = sub->add_option("--seed", o.seeds, "Random seed(s); repeat or comma-separate")
                   ->delimiter(',');
  o.out_opt = sub->add_option("--out", o.out, "Output CSV path (stdout when omitted)");
  sub->add_option("--config", o.config_path, "JSON config file; flags override its values");
  o.step_opt = sub->add_option("--step-size", o.step_size, "Inner step rule")
                   ->check(CLI::IsMember({"linesearch", "dr", "harmonic"}));
  o.eps_opt = sub->add_option("--eps", o.eps,
                              "Fixed inner tolerance; 0 selects the adaptive rule");
  o.beta_opt = sub->add_option("--beta", o.beta, "Adaptive tolerance shrink factor in (0,1)");
  o.max_outer_opt = sub->add_option("--max-outer", o.max_outer, "Outer iteration cap");
  o.max_inner_opt =
      sub->add_option("--max-inner", o.max_inner, "Inner iteration cap per outer round");
  if (with_threads) {
    o.threads_opt =
        sub->add_option("--threads", o.threads, "Worker threads (0 = hardware count)");
  }
}

void merge_solver_opts(ConfigMerge& cfg, SolverOpts& o) {
  cfg.merge_list(o.seed_opt, "seed", o.seeds);
  cfg.merge(o.out_opt, "out", o.out);
  cfg.merge(o.step_opt, "step_size", o.step_size);
  cfg.merge(o.eps_opt, "eps", o.eps);
  cfg.merge(o.beta_opt, "beta", o.beta);
  cfg.merge(o.max_outer_opt, "max_outer", o.max_outer);
  cfg.merge(o.max_inner_opt, "max_inner", o.max_inner);
  cfg.merge(nullptr, "eps_final", o.eps_final);
  cfg.merge(nullptr, "rel_stop_factor", o.rel_stop_factor);
  if (o.threads_opt != nullptr) cfg.merge(o.threads_opt, "threads", o.threads);
}

void validate_solver_opts(const SolverOpts& o) {
  if (o.step_size != "linesearch" && o.step_size != "dr" && o.step_size != "harmonic") {
    throw UsageError("step_size must be one of linesearch, dr, harmonic");
  }
  if (!(o.beta > 0.0) || !(o.beta < 1.0)) throw UsageError("beta must be in (0,1)");
  if (o.eps < 0.0) throw UsageError("eps must be >= 0");
  if (o.max_outer < 1) throw UsageError("max_outer must be >= 1");
  if (o.max_inner < 1) throw UsageError("max_inner must be >= 1");
  if (!(o.eps_final > 0.0)) throw UsageError("eps_final must be > 0");
  if (o.rel_stop_factor < 0.0) throw UsageError("rel_stop_factor must be >= 0");
  if (o.seeds.empty()) throw UsageError("at least one seed is required");
}

dcfw::StepRule make_step_rule(const std::string& name) {
  if (name == "harmonic") return dcfw::StepRule::harmonic();
  if (name == "dr") return dcfw::StepRule::demyanov_rubinov();
  return dcfw::StepRule::exact_linesearch();
}

dcfw::DcfwConfig make_dcfw_config(const SolverOpts& o, std::uint64_t seed) {
  dcfw::DcfwConfig c;
  c.tolerance = o.eps > 0.0 ? dcfw::ToleranceRule::fixed(o.eps)
                            : dcfw::ToleranceRule::adaptive(o.beta);
  c.eps_final = o.eps_final;
  c.rel_stop_factor = o.rel_stop_factor;
  c.max_outer = o.max_outer;
  c.max_inner = o.max_inner;
  c.rule = make_step_rule(o.step_size);
  c.seed = seed;
  return c;
}

dcfw::BaselineConfig make_baseline_config(const SolverOpts& o, long long max_steps) {
  dcfw::BaselineConfig c;
  c.max_steps = max_steps;
  c.rule = make_step_rule(o.step_size);
  c.eps_final = o.eps_final;
  c.rel_stop_factor = o.rel_stop_factor;
  return c;
}

// ---------------------------------------------------------------------------
// qap subcommand.

struct QapOpts {
  SolverOpts solver;
  std::vector<std::string> inputs;
  std::vector<std::string> solvers{"dcfw"};
  int variant = 1;

  CLI::Option* input_opt = nullptr;
  CLI::Option* solver_opt = nullptr;
  CLI::Option* variant_opt = nullptr;
};

struct QapRow {
  std::string instance;
  std::string solver;
  int variant = 0;
  std::uint64_t seed = 0;
  std::size_t outer_iters = 0;
  dcfw::OracleCounters counters;
  double phi_relaxed = 0.0;
  double phi_rounded = 0.0;
  double cost_rounded = 0.0;  // catalog pairing convention, used for the error metric
  double seconds = 0.0;
};

int cmd_qap(QapOpts& o) {
  ConfigMerge cfg(o.solver.config_path);
  merge_solver_opts(cfg, o.solver);
  cfg.merge_list(o.input_opt, "input", o.inputs);
  cfg.merge_list(o.solver_opt, "solver", o.solvers);
  cfg.merge(o.variant_opt, "variant", o.variant);
  cfg.finish();
  validate_solver_opts(o.solver);
  if (o.inputs.empty()) throw UsageError("qap: at least one --input file is required");
  if (o.variant < 1 || o.variant > 3) throw UsageError("variant must be 1, 2, or 3");
  for (const auto& s : o.solvers) {
    if (s != "fw" && s != "dcfw") throw UsageError("qap solver must be fw or dcfw, got " + s);
  }

  std::vector<std::pair<std::string, dcfw::QapInstance>> instances;
  for (const auto& path : o.inputs) {
    try {
      instances.emplace_back(basename_of(path), dcfw::parse_qaplib(read_file(path)));
    } catch (const std::invalid_argument& e) {
      throw UsageError(path + ": " + e.what());
    }
  }

  struct Job {
    std::size_t instance = 0;
    std::string solver;
    std::uint64_t seed = 0;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (const auto& s : o.solvers) {
      for (const auto seed : o.solver.seeds) jobs.push_back({i, s, seed});
    }
  }

  std::vector<QapRow> rows(jobs.size());
  run_pool(jobs.size(), resolve_threads(o.solver.threads), [&](std::size_t i) {
    const Job& job = jobs[i];
    const auto& [name, inst] = instances[job.instance];

    dcfw::QapRunConfig rc;
    rc.seed = job.seed;
    rc.dcfw = make_dcfw_config(o.solver, job.seed);
    rc.baseline = make_baseline_config(o.solver, o.solver.max_inner);

    const dcfw::QapSolver which =
        job.solver == "fw"
            ? dcfw::QapSolver::Fw
            : (o.variant == 1 ? dcfw::QapSolver::DcfwV1
                              : (o.variant == 2 ? dcfw::QapSolver::DcfwV2
                                                : dcfw::QapSolver::DcfwV3));

    const auto t0 = Clock::now();
    const dcfw::QapRunResult run = dcfw::relax_and_round(inst, which, rc);

    QapRow& row = rows[i];
    row.instance = name;
    row.solver = job.solver;
    row.variant = job.solver == "fw" ? 0 : o.variant;
    row.seed = job.seed;
    row.outer_iters = run.solve.trace.rows.size();
    row.counters = run.solve.counters;
    row.phi_relaxed = run.phi_relaxed;
    row.phi_rounded = run.phi_rounded;
    row.cost_rounded = dcfw::qap_pairing_cost(inst.a, inst.b, run.assignment.row_to_col);
    row.seconds = seconds_since(t0);
  });

  // Error baseline per instance: the exact optimum when enumerable, otherwise
  // the best rounded value seen in this invocation.
  std::vector<double> best(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i].second;
    if (inst.best_known.has_value()) {
      best[i] = *inst.best_known;
    } else if (inst.n <= 8) {
      best[i] = dcfw::qap_brute_force(inst.a, inst.b).cost;
    } else {
      double b = rows.empty() ? 0.0 : std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (jobs[r].instance == i) b = std::min(b, rows[r].cost_rounded);
      }
      best[i] = b;
    }
  }

  dcfw::CsvWriter csv({"instance", "solver", "variant", "seed", "outer_iters", "lmo_calls",
                       "grad_calls", "subgrad_calls", "phi_relaxed", "phi_rounded",
                       "assignment_error", "seconds"});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const QapRow& r = rows[i];
    const double ae = dcfw::assignment_error(r.cost_rounded, best[jobs[i].instance]);
    csv.add_row({r.instance, r.solver, std::to_string(r.variant), std::to_string(r.seed),
                 std::to_string(r.outer_iters), std::to_string(r.counters.lmo_calls),
                 std::to_string(r.counters.grad_f_calls),
                 std::to_string(r.counters.subgrad_g_calls), dcfw::format_double(r.phi_relaxed),
                 dcfw::format_double(r.phi_rounded), dcfw::format_double(ae),
                 dcfw::format_double(r.seconds)});
  }
  emit_csv(csv, o.solver.out);

  // Head-to-head summary over (instance, seed) pairs both solvers ran.
  std::map<std::pair<std::size_t, std::uint64_t>, std::pair<double, double>> duels;
  bool have_fw = false, have_dcfw = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& duel = duels.emplace(std::make_pair(jobs[i].instance, jobs[i].seed),
                               std::make_pair(std::numeric_limits<double>::quiet_NaN(),
                                              std::numeric_limits<double>::quiet_NaN()))
                     .first->second;
    if (jobs[i].solver == "fw") {
      duel.first = rows[i].cost_rounded;
      have_fw = true;
    } else {
      duel.second = rows[i].cost_rounded;
      have_dcfw = true;
    }
  }
  if (have_fw && have_dcfw) {
    int wins = 0, ties = 0, losses = 0;
    for (const auto& [key, duel] : duels) {
      if (std::isnan(duel.first) || std::isnan(duel.second)) continue;
      if (duel.second < duel.first) {
        ++wins;
      } else if (duel.second == duel.first) {
        ++ties;
      } else {
        ++losses;
      }
    }
    std::cerr << "summary: dcfw(v" << o.variant << ") vs fw on rounded cost: " << wins
              << " wins, " << ties << " ties, " << losses << " losses\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// grid-gaps subcommand.

struct GridOpts {
  SolverOpts solver;  // only out/config/threads/seed participate
  std::size_t resolution = 81;
  double lo = -1.0;
  double hi = 1.0;
  double smoothness = std::numbers::pi * std::numbers::pi;
  long long prox_iters = 2000;
  double prox_tol_factor = 1e-8;

  CLI::Option* resolution_opt = nullptr;
  CLI::Option* lo_opt = nullptr;
  CLI::Option* hi_opt = nullptr;
  CLI::Option* smoothness_opt = nullptr;
  CLI::Option* prox_iters_opt = nullptr;
  CLI::Option* prox_tol_opt = nullptr;
};

int cmd_grid_gaps(GridOpts& o) {
  ConfigMerge cfg(o.solver.config_path);
  merge_solver_opts(cfg, o.solver);
  cfg.merge(o.resolution_opt, "resolution", o.resolution);
  cfg.merge(o.lo_opt, "lo", o.lo);
  cfg.merge(o.hi_opt, "hi", o.hi);
  cfg.merge(o.smoothness_opt, "smoothness", o.smoothness);
  cfg.merge(o.prox_iters_opt, "prox_iters", o.prox_iters);
  cfg.merge(o.prox_tol_opt, "prox_tol_factor", o.prox_tol_factor);
  cfg.finish();
  if (o.resolution < 3) throw UsageError("resolution must be >= 3");
  if (!(o.lo < o.hi)) throw UsageError("grid requires lo < hi");
  if (!(o.smoothness > 0.0)) throw UsageError("smoothness must be > 0");
  if (o.prox_iters < 1) throw UsageError("prox_iters must be >= 1");
  if (!(o.prox_tol_factor > 0.0)) throw UsageError("prox_tol_factor must be > 0");

  // The ridge-and-valley landscape sin(pi x1) cos(pi x2); its gradient is
  // pi-periodic and the curvature bound is pi^2.
  const double pi = std::numbers::pi;
  dcfw::PhiOracles phi;
  phi.value = [pi](const dcfw::Tensor& x) {
    return std::sin(pi * x[0]) * std::cos(pi * x[1]);
  };
  phi.gradient = [pi](const dcfw::Tensor& x) {
    return dcfw::Tensor::from_vector({pi * std::cos(pi * x[0]) * std::cos(pi * x[1]),
                                      -pi * std::sin(pi * x[0]) * std::sin(pi * x[1])});
  };

  dcfw::ProxOptions prox;
  prox.tol_factor = o.prox_tol_factor;
  prox.max_iterations = o.prox_iters;

  const auto rows = dcfw::evaluate_gap_grid(phi, o.smoothness, o.resolution, o.lo, o.hi, prox,
                                            o.solver.threads);

  dcfw::CsvWriter csv({"x1", "x2", "phi", "gap_pgm", "gap_ppm"});
  for (const auto& r : rows) {
    csv.add_row({dcfw::format_double(r.x1), dcfw::format_double(r.x2),
                 dcfw::format_double(r.phi), dcfw::format_double(r.gap_pgm),
                 dcfw::format_double(r.gap_ppm)});
  }
  emit_csv(csv, o.solver.out);
  return 0;
}

// ---------------------------------------------------------------------------
// align subcommand.

struct AlignOpts {
  SolverOpts solver;
  std::string method = "dcfw";
  std::size_t d = 16;
  std::size_t n = 256;
  double obs_prob = 0.1;
  double noise = 0.0;
  double lambda = 1e-4;
  long long max_steps = 2000;  // fwk step budget

  CLI::Option* method_opt = nullptr;
  CLI::Option* d_opt = nullptr;
  CLI::Option* n_opt = nullptr;
  CLI::Option* obs_opt = nullptr;
  CLI::Option* noise_opt = nullptr;
  CLI::Option* lambda_opt = nullptr;
  CLI::Option* max_steps_opt = nullptr;
};

int cmd_align(AlignOpts& o) {
  ConfigMerge cfg(o.solver.config_path);
  merge_solver_opts(cfg, o.solver);
  cfg.merge(o.method_opt, "solver", o.method);
  cfg.merge(o.d_opt, "d", o.d);
  cfg.merge(o.n_opt, "n", o.n);
  cfg.merge(o.obs_opt, "obs_prob", o.obs_prob);
  cfg.merge(o.noise_opt, "noise", o.noise);
  cfg.merge(o.lambda_opt, "lambda", o.lambda);
  cfg.merge(o.max_steps_opt, "max_steps", o.max_steps);
  cfg.finish();
  validate_solver_opts(o.solver);
  if (o.method != "dcfw" && o.method != "fwk") {
    throw UsageError("align solver must be dcfw or fwk, got " + o.method);
  }
  if (o.max_steps < 1) throw UsageError("max_steps must be >= 1");

  const std::uint64_t seed = o.solver.seeds.front();
  const dcfw::AlignSynthetic synth =
      dcfw::make_align_synthetic(o.d, o.n, o.obs_prob, o.noise, o.lambda, seed);
  const dcfw::DcProblem problem = dcfw::align_oracles(synth.problem);
  const dcfw::Tensor x0({o.d, o.d});  // origin start

  dcfw::DcfwResult result;
  if (o.method == "dcfw") {
    result = dcfw::dcfw_solve(problem, x0, make_dcfw_config(o.solver, seed));
  } else {
    result = dcfw::fw_k(problem, x0, make_baseline_config(o.solver, o.max_steps));
  }

  dcfw::CsvWriter csv({"iter", "fw_gap", "phi", "svd_count", "lmo_count", "seconds"});
  for (const auto& row : result.trace.rows) {
    const long long svds = row.counters.subgrad_g_calls + row.counters.lmo_calls;
    csv.add_row({std::to_string(row.outer_iter), dcfw::format_double(row.surrogate_fw_gap),
                 dcfw::format_double(row.phi_value), std::to_string(svds),
                 std::to_string(row.counters.lmo_calls), dcfw::format_double(row.elapsed_seconds)});
  }
  emit_csv(csv, o.solver.out);

  const dcfw::AlignmentQuality quality =
      dcfw::alignment_quality(result.x_final, synth.problem, synth.x_true);
  std::cerr << "align: solver=" << o.method << " relative_error=" << quality.relative_error
            << " neighbor_accuracy=" << quality.neighbor_accuracy
            << (quality.degenerate_rounding ? " (degenerate rounding)" : "")
            << " lmo=" << result.counters.lmo_calls
            << " subgrad=" << result.counters.subgrad_g_calls << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// bench subcommand: quick single-process timings, CSV out.

struct BenchOpts {
  SolverOpts solver;
};

int cmd_bench(BenchOpts& o) {
  ConfigMerge cfg(o.solver.config_path);
  merge_solver_opts(cfg, o.solver);
  cfg.finish();

  dcfw::CsvWriter csv({"benchmark", "n", "repetitions", "seconds_total", "seconds_per_op"});
  const std::uint64_t seed = o.solver.seeds.front();

  for (const std::size_t n : {8u, 16u, 32u, 64u}) {
    dcfw::SplitMix64 rng(seed + n);
    const int reps = std::max(1, static_cast<int>(20000 / (n * n)));
    dcfw::Tensor cost({n, n});
    double sink = 0.0;
    const auto t0 = Clock::now();
    for (int r = 0; r < reps; ++r) {
      for (std::size_t i = 0; i < cost.size(); ++i) cost[i] = rng.next_double();
      sink += dcfw::solve_lap(cost).cost;
    }
    const double total = seconds_since(t0);
    csv.add_row({"lap", std::to_string(n), std::to_string(reps), dcfw::format_double(total),
                 dcfw::format_double(total / reps)});
    if (!std::isfinite(sink)) throw std::runtime_error("bench: non-finite assignment cost");
  }

  {
    const std::size_t dim = 64;
    dcfw::SplitMix64 rng(seed);
    std::vector<double> center(dim);
    for (auto& c : center) c = rng.next_double() / dim;
    const dcfw::Tensor c = dcfw::Tensor::from_vector(center);

    dcfw::SurrogateProblem s;
    s.gradient = [&c](const dcfw::Tensor& x) { return x - c; };
    s.value = [&c](const dcfw::Tensor& x) { return 0.5 * dcfw::norm2_squared(x - c); };
    s.set = dcfw::make_simplex(dim);
    s.smoothness = 1.0;

    dcfw::FwOptions opt;
    opt.eps_half = 1e-14;
    opt.max_inner = 20000;
    opt.rule = dcfw::StepRule::harmonic();

    dcfw::Tensor x0({dim});
    x0[0] = 1.0;
    const auto t0 = Clock::now();
    const dcfw::FwResult res = dcfw::fw_solve(s, x0, opt);
    const double total = seconds_since(t0);
    csv.add_row({"fw_inner", std::to_string(dim), std::to_string(res.iterations),
                 dcfw::format_double(total),
                 dcfw::format_double(total / static_cast<double>(std::max<long long>(
                                                 res.iterations, 1)))});
  }

  {
    const std::size_t n = 8;
    dcfw::SplitMix64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    dcfw::Tensor a({n, n}), b({n, n});
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = rng.next_double();
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = rng.next_double();
    dcfw::QapInstance inst;
    inst.n = n;
    inst.a = a;
    inst.b = b;
    dcfw::QapRunConfig rc;
    rc.seed = seed;
    rc.dcfw = make_dcfw_config(o.solver, seed);
    rc.dcfw.max_outer = 10;
    rc.dcfw.max_inner = 2000;
    const auto t0 = Clock::now();
    const dcfw::QapRunResult run = dcfw::relax_and_round(inst, dcfw::QapSolver::DcfwV1, rc);
    const double total = seconds_since(t0);
    csv.add_row({"qap_pipeline", std::to_string(n),
                 std::to_string(run.solve.trace.rows.size()), dcfw::format_double(total),
                 dcfw::format_double(total)});
  }

  emit_csv(csv, o.solver.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projection-free solvers for difference-of-convex minimization"};
  app.require_subcommand(1);

  QapOpts qap;
  CLI::App* qap_cmd =
      app.add_subcommand("qap", "Relax-and-round quadratic assignment runs, CSV per run");
  attach_solver_opts(qap_cmd, qap.solver, /*with_threads=*/true);
  qap.input_opt = qap_cmd->add_option("--input", qap.inputs, "Instance file(s), catalog format")
                      ->check(CLI::ExistingFile);
  qap.solver_opt = qap_cmd->add_option("--solver", qap.solvers, "Solver(s) to run: fw, dcfw")
                       ->check(CLI::IsMember({"fw", "dcfw"}));
  qap.variant_opt =
      qap_cmd->add_option("--variant", qap.variant, "DC split for dcfw: 1, 2, or 3")
          ->check(CLI::Range(1, 3));

  GridOpts grid;
  CLI::App* grid_cmd = app.add_subcommand(
      "grid-gaps", "Stationarity-gap landscape of sin(pi x1) cos(pi x2) on a square grid");
  attach_solver_opts(grid_cmd, grid.solver, /*with_threads=*/true);
  grid.resolution_opt =
      grid_cmd->add_option("--resolution", grid.resolution, "Grid points per axis (>= 3)");
  grid.lo_opt = grid_cmd->add_option("--lo", grid.lo, "Lower bound of the square domain");
  grid.hi_opt = grid_cmd->add_option("--hi", grid.hi, "Upper bound of the square domain");
  grid.smoothness_opt =
      grid_cmd->add_option("--smoothness", grid.smoothness, "Curvature constant L");
  grid.prox_iters_opt =
      grid_cmd->add_option("--prox-iters", grid.prox_iters, "Iteration budget per prox subsolve");
  grid.prox_tol_opt = grid_cmd->add_option("--prox-tol-factor", grid.prox_tol_factor,
                                           "Prox subsolve tolerance factor");

  AlignOpts align;
  CLI::App* align_cmd = app.add_subcommand(
      "align", "Partially observed embedding alignment on synthetic data, trace CSV");
  attach_solver_opts(align_cmd, align.solver, /*with_threads=*/false);
  align.method_opt = align_cmd->add_option("--solver", align.method, "dcfw or fwk")
                         ->check(CLI::IsMember({"dcfw", "fwk"}));
  align.d_opt = align_cmd->add_option("--d", align.d, "Embedding dimension (>= 2)");
  align.n_opt = align_cmd->add_option("--n", align.n, "Number of embedded points (>= d)");
  align.obs_opt =
      align_cmd->add_option("--obs-prob", align.obs_prob, "Entry observation probability");
  align.noise_opt = align_cmd->add_option("--noise", align.noise, "Target noise level");
  align.lambda_opt =
      align_cmd->add_option("--lambda", align.lambda, "Nuclear-norm bonus weight");
  align.max_steps_opt =
      align_cmd->add_option("--max-steps", align.max_steps, "Step budget for fwk");

  BenchOpts bench;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "Quick micro-benchmark sweep (assignment, inner loop, pipeline)");
  attach_solver_opts(bench_cmd, bench.solver, /*with_threads=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (qap_cmd->parsed()) return cmd_qap(qap);
    if (grid_cmd->parsed()) return cmd_grid_gaps(grid);
    if (align_cmd->parsed()) return cmd_align(align);
    if (bench_cmd->parsed()) return cmd_bench(bench);
    std::cerr << "error: no subcommand selected\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 1;
  }
}

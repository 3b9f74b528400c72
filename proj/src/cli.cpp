// Copyright 2026 The rqco Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rqco/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI/CLI.hpp>

#include "rqco/io.hpp"
#include "rqco/kernels.hpp"
#include "rqco/random.hpp"

namespace rqco {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void print_error(std::ostream& err, const std::string& type, const std::string& message,
                 const std::string& key = {}) {
  Json e = {{"type", type}, {"message", message}};
  if (!key.empty()) e["key"] = key;
  err << Json{{"error", e}}.dump() << '\n';
}

std::optional<bool> parse_on_off(const std::string& s, const char* flag) {
  if (s.empty()) return std::nullopt;
  if (s == "on") return true;
  if (s == "off") return false;
  throw ConfigError(std::string(flag) + " expects on or off", flag);
}

int resolve_workers(int flag, int fallback) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("RQCO_WORKERS")) {
    char* end = nullptr;
    const long w = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || w < 1 || w > 1024) {
      throw ConfigError("RQCO_WORKERS must be a positive integer", "RQCO_WORKERS");
    }
    return static_cast<int>(w);
  }
  return fallback;
}

std::vector<int> parse_int_list(const std::string& s, const char* flag) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const int v = std::stoi(item, &pos);
      if (pos != item.size() || v < 1) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError(std::string(flag) + " expects a comma-separated list of positive integers",
                        flag);
    }
  }
  if (out.empty()) throw ConfigError(std::string(flag) + " is empty", flag);
  return out;
}

// optimize

struct OptimizeArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  int workers = 0;
  std::string out_dir;
  std::string parity;
  std::string dedup;
};

int cmd_optimize(const OptimizeArgs& a, std::ostream& out) {
  RunConfig config = read_run_config(a.config);
  if (a.seed) config.circuit.seed = *a.seed;
  config.execution.workers = resolve_workers(a.workers, config.execution.workers);
  if (auto p = parse_on_off(a.parity, "--parity")) config.execution.parity_mode = *p;
  if (auto d = parse_on_off(a.dedup, "--dedup")) config.execution.translation_dedup = *d;
  if (!a.out_dir.empty()) config.output_dir = a.out_dir;

  const HamiltonianSpec spec = build_model(config.model);
  const Circuit circuit = build_initial_circuit(config, spec);

  ObjectiveOptions options;
  options.workers = config.execution.workers;
  options.structure =
      config.execution.parity_mode ? GateStructure::kParity : GateStructure::kDense;
  options.translation_dedup = config.execution.translation_dedup;
  if (options.translation_dedup && !circuit.is_periodic_brickwall()) {
    throw ConfigError("translation dedup needs a periodic brick-wall circuit",
                      "execution.translation_dedup");
  }
  if (config.execution.parity_mode) {
    for (const auto& g : circuit.logical_gates()) {
      if (!is_parity_sparse(g)) {
        throw ConfigError("parity mode needs parity-sparse initial gates",
                          "execution.parity_mode");
      }
    }
  }

  const auto oracle = make_oracle(spec, config.model.t, config.model.oracle);
  const auto t0 = Clock::now();
  const OptimizationResult result =
      trust_region_optimize(circuit, *oracle, config.optimizer, options);
  const double wall = seconds_since(t0);

  const fs::path dir = config.output_dir;
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "trace.csv");
    write_trace_csv(csv, result.trace);
  }
  write_checkpoint(dir / "gates.json", result.circuit);

  const auto& first = result.trace.records.front();
  const auto& last = result.trace.records.back();
  Json summary = {
      {"model", to_string(config.model.kind)},
      {"num_qubits", spec.num_qubits},
      {"logical_gates", circuit.num_logical()},
      {"slots", circuit.num_slots()},
      {"t", config.model.t},
      {"parity_mode", config.execution.parity_mode},
      {"translation_dedup", config.execution.translation_dedup},
      {"workers", config.execution.workers},
      {"initial_f", first.f},
      {"final_f", last.f},
      {"initial_error_frobenius", first.error_frobenius},
      {"final_error_frobenius", last.error_frobenius},
      {"error_reduction", last.error_frobenius > 0
                              ? first.error_frobenius / last.error_frobenius
                              : std::numeric_limits<double>::infinity()},
      {"final_grad_norm", last.grad_norm},
      {"iterations", last.iter},
      {"stop_reason", to_string(result.trace.stop)},
      {"converged_at_start", last.iter == 0 && result.trace.stop == StopReason::kGradientTolerance},
      {"wall_seconds", wall},
  };
  if (!std::isfinite(summary["error_reduction"].get<double>())) summary["error_reduction"] = nullptr;
  {
    std::ofstream js(dir / "summary.json");
    js << summary.dump(2) << '\n';
  }
  out << summary.dump(2) << '\n';
  return kExitOk;
}

// check

struct CheckArgs {
  std::string kind = "all";
  int qubits = 3;
  int slots = 6;
  std::uint64_t seed = 1;
  int workers = 0;
};

// Dense matrix of a two-qubit gate on k qubits, built entry by entry.
MatrixXc embed_gate(int k, const Matrix4c& g, QubitPair t) {
  const Index dim = Index{1} << k;
  const int s1 = k - 1 - t.first, s2 = k - 1 - t.second;
  MatrixXc m = MatrixXc::Zero(dim, dim);
  for (Index x = 0; x < dim; ++x) {
    const int col = 2 * ((x >> s1) & 1) + ((x >> s2) & 1);
    const Index env = x & ~((Index{1} << s1) | (Index{1} << s2));
    for (int row = 0; row < 4; ++row) {
      const Index y = env | (Index{(row >> 1) & 1} << s1) | (Index{row & 1} << s2);
      m(y, x) += g(row, col);
    }
  }
  return m;
}

struct CheckResult {
  std::string name;
  double error = 0.0;
  double tolerance = 0.0;
  bool pass() const { return std::isfinite(error) && error <= tolerance; }
};

double rel_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

std::vector<QubitPair> all_target_pairs(int k) {
  std::vector<QubitPair> out;
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      if (a != b) out.push_back({a, b});
    }
  }
  return out;
}

std::vector<CheckResult> check_kernels(int k, Rng& rng) {
  const Index dim = Index{1} << k;
  double e_apply = 0.0, e_contract = 0.0, e_hole = 0.0;
  for (const QubitPair t : all_target_pairs(k)) {
    const Matrix4c g = random_gaussian(4, 4, rng);
    const MatrixXc dense = embed_gate(k, g, t);
    const int s1 = k - 1 - t.first, s2 = k - 1 - t.second;
    for (Index x = 0; x < dim; ++x) {
      const StateVector ket = StateVector::basis(k, static_cast<std::uint64_t>(x));
      const StateVector y = apply_gate(ket, Gate{g, t, false});
      e_apply = std::max(e_apply, (y.amplitudes() - dense.col(x)).cwiseAbs().maxCoeff());

      const StateVectorArray h = hole_apply(ket, t);
      VectorXc z = VectorXc::Zero(dim);
      for (Index p = 0; p < dim; ++p) {
        for (int e = 0; e < 16; ++e) z[p] += g(e / 4, e % 4) * h.data()[p * 16 + e];
      }
      e_hole = std::max(e_hole, (z - dense.col(x)).cwiseAbs().maxCoeff());

      for (Index xb = 0; xb < dim; ++xb) {
        const StateVector bra = StateVector::basis(k, static_cast<std::uint64_t>(xb));
        const Matrix4c d = hole_contract(bra, ket, t);
        Matrix4c expected = Matrix4c::Zero();
        const Index mask = (Index{1} << s1) | (Index{1} << s2);
        if ((x & ~mask) == (xb & ~mask)) {
          const int i = 2 * ((xb >> s1) & 1) + ((xb >> s2) & 1);
          const int j = 2 * ((x >> s1) & 1) + ((x >> s2) & 1);
          expected(i, j) = 1.0;
        }
        e_contract = std::max(e_contract, (d - expected).cwiseAbs().maxCoeff());
      }
    }
  }
  return {{"kernels.apply_gate", e_apply, 1e-13},
          {"kernels.hole_contract", e_contract, 1e-13},
          {"kernels.hole_apply", e_hole, 1e-13}};
}

struct CheckProblem {
  Circuit circuit;
  DenseUnitaryOracle oracle;
};

// Random targets; the last slot reuses logical gate 0 so shared-gate
// accumulation is exercised.
CheckProblem make_check_problem(int k, int n, Rng& rng) {
  std::uniform_int_distribution<int> pick(0, k - 1);
  std::vector<GateSlot> slots;
  const int logical = n >= 2 ? n - 1 : n;
  for (int s = 0; s < n; ++s) {
    QubitPair t{pick(rng), 0};
    do t.second = pick(rng);
    while (t.second == t.first);
    slots.push_back({s < logical ? s : 0, t});
  }
  Circuit c(k, std::move(slots), random_gates(logical, rng));
  return {std::move(c), DenseUnitaryOracle(random_unitary(Index{1} << k, rng))};
}

double value_at(const Circuit& c, const TargetUnitaryOracle& u, const ProductPoint& point) {
  return target_value(c.with_gates(from_components(point, GateStructure::kDense)), u);
}

std::vector<CheckResult> check_gradient(const CheckProblem& p, int workers, Rng& rng) {
  ObjectiveOptions o;
  o.workers = workers;
  const ObjectiveReport r = full_gradient(p.circuit, p.oracle, o);
  const ProductPoint x = to_components(p.circuit.logical_gates(), GateStructure::kDense);
  const double h = 1e-5;
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    ProductTangent d = random_tangent(x, rng);
    const double fd = (value_at(p.circuit, p.oracle, retract(x, scaled(h, d))) -
                       value_at(p.circuit, p.oracle, retract(x, scaled(-h, d)))) /
                      (2 * h);
    worst = std::max(worst, rel_error(fd, product_inner(r.riemannian_gradient, d)));
  }
  return {{"gradient.finite_difference", worst, 1e-6}};
}

std::vector<CheckResult> check_hessian(const CheckProblem& p, int workers, bool with_hvp,
                                       Rng& rng) {
  ObjectiveOptions o;
  o.workers = workers;
  const ObjectiveReport r = evaluate(p.circuit, p.oracle, o, true);
  const ProductPoint x = to_components(p.circuit.logical_gates(), GateStructure::kDense);
  const HessianOperator hess =
      riemannian_hessian(x, r.euclidean_gradient, *r.hessian, GateStructure::kDense);

  double sym = 0.0, curvature = 0.0, hvp = 0.0;
  const double h = 1e-3;
  const double f0 = r.value;
  for (int trial = 0; trial < 5; ++trial) {
    const ProductTangent a = random_tangent(x, rng), b = random_tangent(x, rng);
    const ProductTangent ha = hess(a), hb = hess(b);
    sym = std::max(sym, std::abs(product_inner(a, hb) - product_inner(ha, b)) /
                            std::max(product_norm(ha) * product_norm(b), 1e-300));
    // Five-point second difference along the polar retraction, which is
    // second order, so it sees <a, Hess a>.
    const auto f = [&](double s) { return value_at(p.circuit, p.oracle, retract(x, scaled(s, a))); };
    const double d2 = (-f(2 * h) + 16 * f(h) - 30 * f0 + 16 * f(-h) - f(-2 * h)) / (12 * h * h);
    curvature = std::max(curvature, rel_error(d2, product_inner(a, ha)));
    if (with_hvp) {
      const ProductTangent hv =
          riemannian_hessian_hvp(p.circuit, p.oracle, x, r.euclidean_gradient, o)(a);
      ProductTangent diff = hv;
      axpy(-1.0, ha, diff);
      hvp = std::max(hvp, product_norm(diff) / std::max(product_norm(ha), 1e-300));
    }
  }
  std::vector<CheckResult> out = {{"hessian.symmetry", sym, 1e-8},
                                  {"hessian.second_difference", curvature, 1e-6}};
  if (with_hvp) out.push_back({"hvp.assembled", hvp, 1e-9});
  return out;
}

int cmd_check(const CheckArgs& a, std::ostream& out) {
  if (a.qubits < 2 || a.qubits > 6) {
    throw ConfigError("check supports 2 to 6 qubits", "--qubits");
  }
  if (a.slots < 1 || a.slots > 32) throw ConfigError("--slots must be in [1, 32]", "--slots");
  const std::vector<std::string> kinds = {"gradient", "hessian", "hvp", "kernels", "all"};
  if (std::find(kinds.begin(), kinds.end(), a.kind) == kinds.end()) {
    throw ConfigError("--kind must be gradient, hessian, hvp, kernels or all", "--kind");
  }
  const int workers = resolve_workers(a.workers, 1);
  Rng rng(a.seed);
  const bool all = a.kind == "all";
  std::vector<CheckResult> results;
  auto append = [&](std::vector<CheckResult> r) {
    results.insert(results.end(), r.begin(), r.end());
  };
  if (all || a.kind == "kernels") append(check_kernels(a.qubits, rng));
  const CheckProblem problem = make_check_problem(a.qubits, a.slots, rng);
  if (all || a.kind == "gradient") append(check_gradient(problem, workers, rng));
  if (all || a.kind == "hessian" || a.kind == "hvp") {
    auto r = check_hessian(problem, workers, all || a.kind == "hvp", rng);
    if (a.kind == "hvp") r.erase(r.begin(), r.end() - 1);
    append(std::move(r));
  }
  bool ok = true;
  for (const auto& r : results) {
    out << std::left << std::setw(28) << r.name << " max_rel_err=" << std::scientific
        << std::setprecision(3) << r.error << " tol=" << r.tolerance << ' '
        << (r.pass() ? "PASS" : "FAIL") << '\n';
    ok = ok && r.pass();
  }
  return ok ? kExitOk : kExitFailure;
}

// bench

struct BenchArgs {
  std::string kind = "gradient";
  std::string qubits = "8";
  std::string layers = "4";
  std::string workers = "1,2,4";
  int repeats = 3;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

struct BenchRow {
  std::string kind, variant;
  int qubits = 0, layers = 0, slots = 0, workers = 1, repeats = 0;
  double median_seconds = 0.0;
  double speedup = NAN;
  double per_summand_seconds = NAN;
  double extrapolated_seconds = NAN;
  std::int64_t pair_count = -1;
  std::int64_t full_pair_count = -1;
  std::int64_t multiplicity_sum = -1;
  int bit_identical = -1;
};

constexpr const char* kBenchHeader =
    "kind,variant,qubits,layers,slots,workers,repeats,median_seconds,speedup,"
    "per_summand_seconds,extrapolated_seconds,pair_count,full_pair_count,multiplicity_sum,"
    "bit_identical";

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  auto opt = [](auto v) { return v < 0 ? std::string() : std::to_string(v); };
  auto num = [](double v) { return std::isnan(v) ? std::string() : format_double(v); };
  out << kBenchSchema << '\n' << kBenchHeader << '\n';
  for (const auto& r : rows) {
    out << r.kind << ',' << r.variant << ',' << r.qubits << ',' << r.layers << ',' << r.slots
        << ',' << r.workers << ',' << r.repeats << ',' << format_double(r.median_seconds) << ','
        << num(r.speedup) << ',' << num(r.per_summand_seconds) << ','
        << num(r.extrapolated_seconds) << ',' << opt(r.pair_count) << ','
        << opt(r.full_pair_count) << ',' << opt(r.multiplicity_sum) << ','
        << opt(r.bit_identical) << '\n';
  }
}

template <typename Fn>
double time_median(int repeats, Fn&& fn) {
  std::vector<double> t;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = Clock::now();
    fn();
    t.push_back(seconds_since(t0));
  }
  return median(std::move(t));
}

struct BenchProblem {
  Circuit circuit;
  std::unique_ptr<TargetUnitaryOracle> oracle;
};

// Periodic brick wall with random gates against a periodic spinless chain, so
// translation dedup applies.
BenchProblem make_bench_problem(int k, int layers, Rng& rng) {
  if (k < 4 || k % 2) throw ConfigError("bench needs an even qubit count >= 4", "--qubits");
  const HamiltonianSpec spec = build_spinless_fh(k, 1.0, 4.0, true);
  const OracleMethod m = k <= kDenseQubitCap ? OracleMethod::kDense : OracleMethod::kKrylov;
  return {build_brickwall(k, layers, random_gates(layers, rng), true), make_oracle(spec, 0.5, m)};
}

bool same_bits(const ObjectiveReport& a, const ObjectiveReport& b) {
  if (a.value != b.value || a.error_sq != b.error_sq) return false;
  for (std::size_t l = 0; l < a.holomorphic_gradient.size(); ++l) {
    if (a.holomorphic_gradient[l] != b.holomorphic_gradient[l]) return false;
  }
  if (a.hessian.has_value() != b.hessian.has_value()) return false;
  return !a.hessian || a.hessian->dense() == b.hessian->dense();
}

std::vector<BenchRow> bench_kernels(int k, int repeats, Rng& rng) {
  const StateVector psi = random_state(k, rng), bra = random_state(k, rng);
  const Matrix4c g = random_unitary(4, rng);
  const QubitPair adjacent{k / 2 - 1, k / 2}, general{0, k - 1};
  const int calls = std::max(1, (1 << 20) >> k);
  StateVector out_state(k);
  StateVectorArray arr = hole_apply(psi, adjacent), out_arr;
  std::vector<BenchRow> rows;
  auto add = [&](const char* variant, auto&& fn) {
    BenchRow r;
    r.kind = "kernels";
    r.variant = variant;
    r.qubits = k;
    r.repeats = repeats;
    r.median_seconds = time_median(repeats, [&] {
                         for (int c = 0; c < calls; ++c) fn();
                       }) /
                       calls;
    rows.push_back(r);
  };
  add("apply_gate_adjacent", [&] { apply_gate(psi, Gate{g, adjacent, false}, out_state); });
  add("apply_gate_general", [&] { apply_gate(psi, Gate{g, general, false}, out_state); });
  add("apply_gate_streaming", [&] {
    apply_gate(psi, Gate{g, adjacent, false}, out_state, LoopOrder::kStreaming);
  });
  add("hole_contract", [&] { (void)hole_contract(bra, psi, adjacent); });
  add("hole_apply", [&] { hole_apply(psi, adjacent, arr); });
  add("apply_gate_to_array", [&] { apply_gate_to_array(arr, Gate{g, general, false}, out_arr); });
  add("hole_contract_array", [&] { (void)hole_contract_array(bra, arr, general); });
  return rows;
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  const std::vector<std::string> kinds = {"kernels", "gradient", "hessian", "scaling"};
  if (std::find(kinds.begin(), kinds.end(), a.kind) == kinds.end()) {
    throw ConfigError("--kind must be kernels, gradient, hessian or scaling", "--kind");
  }
  if (a.repeats < 1) throw ConfigError("--repeats must be positive", "--repeats");
  const auto qubits = parse_int_list(a.qubits, "--qubits");
  const auto layers = parse_int_list(a.layers, "--layers");
  std::vector<int> workers = parse_int_list(a.workers, "--workers");
  for (int k : qubits) {
    if (k > 24) throw ConfigError("bench supports at most 24 qubits", "--qubits");
  }
  Rng rng(a.seed);
  std::vector<BenchRow> rows;
  bool all_identical = true;

  for (int k : qubits) {
    if (a.kind == "kernels") {
      auto r = bench_kernels(k, a.repeats, rng);
      rows.insert(rows.end(), r.begin(), r.end());
      continue;
    }
    for (int nl : layers) {
      const BenchProblem p = make_bench_problem(k, nl, rng);
      BenchRow base;
      base.kind = a.kind;
      base.qubits = k;
      base.layers = nl;
      base.slots = p.circuit.num_slots();
      base.repeats = a.repeats;
      base.workers = workers.front();
      const double dim = std::ldexp(1.0, k);

      if (a.kind == "gradient") {
        BenchRow summand = base;
        summand.variant = "summand";
        summand.median_seconds = time_median(
            a.repeats, [&] { (void)summand_gradient(0, p.circuit, *p.oracle); });
        summand.per_summand_seconds = summand.median_seconds;
        summand.extrapolated_seconds = summand.median_seconds * dim;
        rows.push_back(summand);
        BenchRow full = base;
        full.variant = "full";
        ObjectiveOptions o;
        o.workers = base.workers;
        full.median_seconds =
            time_median(a.repeats, [&] { (void)full_gradient(p.circuit, *p.oracle, o); });
        full.per_summand_seconds = full.median_seconds / dim;
        rows.push_back(full);
      } else if (a.kind == "hessian") {
        const int n = p.circuit.num_slots();
        const auto classes = translation_classes(p.circuit);
        std::int64_t mult = 0;
        for (const auto& c : classes) mult += c.multiplicity;
        for (bool dedup : {false, true}) {
          ObjectiveOptions o;
          o.workers = base.workers;
          o.translation_dedup = dedup;
          o.hessian_strategy = HessianStrategy::kPerSlot;
          BenchRow r = base;
          r.variant = dedup ? "per_slot_dedup" : "per_slot";
          ObjectiveReport rep;
          r.median_seconds =
              time_median(a.repeats, [&] { rep = evaluate(p.circuit, *p.oracle, o, true); });
          r.per_summand_seconds = r.median_seconds / dim;
          r.pair_count = static_cast<std::int64_t>(hessian_pair_count(p.circuit, o));
          r.full_pair_count = static_cast<std::int64_t>(n) * (n - 1) / 2;
          r.multiplicity_sum = mult;
          // Instrumented contractions per basis state must equal the plan.
          const bool counted =
              rep.counts.array_contractions ==
              static_cast<std::uint64_t>(r.pair_count) * static_cast<std::uint64_t>(dim);
          const bool expected = dedup ? r.pair_count == static_cast<std::int64_t>(classes.size()) &&
                                            mult == r.full_pair_count
                                      : r.pair_count == r.full_pair_count;
          if (!counted || !expected) {
            out << "pair-count mismatch for " << r.variant << '\n';
            all_identical = false;
          }
          rows.push_back(r);
        }
      } else {
        ObjectiveReport reference;
        double t1 = NAN;
        double prev_speedup = 0.0;
        for (int w : workers) {
          ObjectiveOptions o;
          o.workers = w;
          ObjectiveReport rep;
          BenchRow r = base;
          r.variant = "hessian";
          r.workers = w;
          r.median_seconds =
              time_median(a.repeats, [&] { rep = evaluate(p.circuit, *p.oracle, o, true); });
          if (std::isnan(t1)) {
            t1 = r.median_seconds;
            reference = rep;
          }
          r.speedup = t1 / r.median_seconds;
          r.bit_identical = same_bits(rep, reference) ? 1 : 0;
          all_identical = all_identical && r.bit_identical == 1;
          if (r.speedup < prev_speedup) {
            out << "warning: speedup drops at " << w << " workers\n";
          }
          prev_speedup = r.speedup;
          rows.push_back(r);
        }
      }
    }
  }

  fs::create_directories(a.out_dir);
  const fs::path path = fs::path(a.out_dir) / "bench.csv";
  std::ofstream csv(path);
  write_bench_csv(csv, rows);
  write_bench_csv(out, rows);
  if (!all_identical) {
    out << "bench consistency check failed\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Riemannian trust-region optimization of two-qubit circuit gates", "rqco"};
  app.require_subcommand(1);

  OptimizeArgs opt;
  auto* optimize = app.add_subcommand("optimize", "optimize gates for a run config");
  optimize->add_option("--config", opt.config, "run config JSON")->required();
  optimize->add_option("--seed", opt.seed, "seed for random initialization");
  optimize->add_option("--workers", opt.workers, "worker threads (default $RQCO_WORKERS)");
  optimize->add_option("--out", opt.out_dir, "output directory");
  optimize->add_option("--parity", opt.parity, "parity-conserving gates: on|off");
  optimize->add_option("--dedup", opt.dedup, "translation dedup of Hessian pairs: on|off");

  CheckArgs chk;
  auto* check = app.add_subcommand("check", "derivative and kernel checks on random circuits");
  check->add_option("--kind", chk.kind, "gradient|hessian|hvp|kernels|all");
  check->add_option("--qubits", chk.qubits, "qubit count (at most 6)");
  check->add_option("--slots", chk.slots, "gate slots");
  check->add_option("--seed", chk.seed, "random seed");
  check->add_option("--workers", chk.workers, "worker threads");

  BenchArgs bn;
  auto* bench = app.add_subcommand("bench", "kernel, gradient, Hessian and scaling timings");
  bench->add_option("--kind", bn.kind, "kernels|gradient|hessian|scaling");
  bench->add_option("--qubits", bn.qubits, "comma-separated qubit counts");
  bench->add_option("--layers", bn.layers, "comma-separated layer counts");
  bench->add_option("--workers", bn.workers, "comma-separated worker counts");
  bench->add_option("--repeats", bn.repeats, "timing repeats (median reported)");
  bench->add_option("--seed", bn.seed, "random seed");
  bench->add_option("--out", bn.out_dir, "output directory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    print_error(err, "usage", e.what());
    return kExitUsage;
  }

  try {
    if (optimize->parsed()) return cmd_optimize(opt, out);
    if (check->parsed()) return cmd_check(chk, out);
    return cmd_bench(bn, out);
  } catch (const ConfigError& e) {
    print_error(err, "config", e.what(), e.key());
    return kExitUsage;
  } catch (const std::exception& e) {
    print_error(err, "runtime", e.what());
    return kExitFailure;
  }
}

}  // namespace rqco

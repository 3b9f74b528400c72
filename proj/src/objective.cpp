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

#include "rqco/objective.hpp"

#include <chrono>
#include <cmath>
#include <utility>

#include "rqco/kernels.hpp"
#include "rqco/parallel.hpp"

namespace rqco {

// ---- oracles ----------------------------------------------------------------

void TargetUnitaryOracle::apply_basis(std::uint64_t j, StateVector& out) const {
  apply(StateVector::basis(num_qubits(), j), out);
}

DenseUnitaryOracle::DenseUnitaryOracle(MatrixXc unitary) : unitary_(std::move(unitary)) {
  const Index dim = unitary_.rows();
  if (dim != unitary_.cols() || dim < 1 || (dim & (dim - 1)) != 0) {
    throw DimensionError("dense oracle needs a square 2^k matrix");
  }
  while ((Index{1} << num_qubits_) < dim) ++num_qubits_;
}

void DenseUnitaryOracle::apply(const StateVector& in, StateVector& out) const {
  if (in.size() != unitary_.rows()) throw DimensionError("oracle: size mismatch");
  if (out.size() != in.size()) out.reset(num_qubits_);
  out.amplitudes().noalias() = unitary_ * in.amplitudes();
}

void DenseUnitaryOracle::apply_adjoint(const StateVector& in, StateVector& out) const {
  if (in.size() != unitary_.rows()) throw DimensionError("oracle: size mismatch");
  if (out.size() != in.size()) out.reset(num_qubits_);
  out.amplitudes().noalias() = unitary_.adjoint() * in.amplitudes();
}

void DenseUnitaryOracle::apply_basis(std::uint64_t j, StateVector& out) const {
  if (j >= static_cast<std::uint64_t>(unitary_.cols())) {
    throw DimensionError("oracle: basis index out of range");
  }
  if (out.size() != unitary_.rows()) out.reset(num_qubits_);
  out.amplitudes() = unitary_.col(static_cast<Index>(j));
}

// ---- counters and Hessian blocks -------------------------------------------

PassCounts& PassCounts::operator+=(const PassCounts& o) {
  gate_applications += o.gate_applications;
  hole_contractions += o.hole_contractions;
  hole_applications += o.hole_applications;
  array_gate_applications += o.array_gate_applications;
  array_contractions += o.array_contractions;
  oracle_applications += o.oracle_applications;
  basis_states += o.basis_states;
  amplitude_work += o.amplitude_work;
  return *this;
}

HessianBlocks::HessianBlocks(int num_logical, std::vector<int> entries)
    : num_logical_(num_logical), entries_(std::move(entries)) {
  const Index d = static_cast<Index>(entries_.size());
  blocks_.assign(static_cast<std::size_t>(num_logical) *
                     static_cast<std::size_t>(num_logical + 1) / 2,
                 MatrixXc::Zero(d, d));
}

std::size_t HessianBlocks::packed(int a, int b) const {
  if (a < 0 || b < 0 || a >= num_logical_ || b >= num_logical_ || a > b) {
    throw DimensionError("HessianBlocks: block index out of range");
  }
  // Row-major upper triangle.
  const std::size_t n = static_cast<std::size_t>(num_logical_);
  const std::size_t ua = static_cast<std::size_t>(a);
  return ua * n - ua * (ua - 1) / 2 + static_cast<std::size_t>(b - a);
}

MatrixXc& HessianBlocks::block(int a, int b) { return blocks_[packed(a, b)]; }
const MatrixXc& HessianBlocks::block(int a, int b) const { return blocks_[packed(a, b)]; }

MatrixXc HessianBlocks::full_block(int a, int b) const {
  return a <= b ? block(a, b) : MatrixXc(block(b, a).transpose());
}

VectorXc HessianBlocks::apply(const VectorXc& x) const {
  const Index d = block_dim();
  if (x.size() != d * num_logical_) throw DimensionError("HessianBlocks::apply: bad length");
  VectorXc y = VectorXc::Zero(x.size());
  for (int a = 0; a < num_logical_; ++a) {
    for (int b = a; b < num_logical_; ++b) {
      const MatrixXc& h = block(a, b);
      y.segment(a * d, d).noalias() += h * x.segment(b * d, d);
      if (b != a) y.segment(b * d, d).noalias() += h.transpose() * x.segment(a * d, d);
    }
  }
  return y;
}

MatrixXc HessianBlocks::dense() const {
  const Index d = block_dim();
  MatrixXc out(d * num_logical_, d * num_logical_);
  for (int a = 0; a < num_logical_; ++a) {
    for (int b = 0; b < num_logical_; ++b) out.block(a * d, b * d, d, d) = full_block(a, b);
  }
  return out;
}

// ---- passes -------------------------------------------------------------------

namespace {

Gate transposed(Gate g) {
  g.matrix.transposeInPlace();
  return g;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_compatible(const Circuit& circuit, const TargetUnitaryOracle& oracle) {
  if (circuit.num_qubits() != oracle.num_qubits()) {
    throw DimensionError("oracle and circuit qubit counts differ");
  }
}

void check_trace_bound(double value, int num_qubits) {
  const double bound = std::ldexp(1.0, num_qubits);
  if (!(value >= -bound * (1.0 + 1e-10))) {
    throw Error("objective below -2^k: gates or oracle are not unitary");
  }
}

struct Partner {
  int slot = 0;
  double weight = 1.0;
};

// One second forward pass: a hole array started at `start_slot` and
// contracted at each partner slot. Fused passes also add the holes of later
// slots of the same logical gate.
struct HolePass {
  int start_slot = 0;
  int logical = 0;
  bool fused = false;
  std::vector<Partner> partners;
};

std::vector<HolePass> make_hessian_plan(const Circuit& circuit,
                                        const ObjectiveOptions& options) {
  HessianStrategy strategy = options.hessian_strategy;
  if (strategy == HessianStrategy::kAuto) {
    strategy = options.translation_dedup ? HessianStrategy::kPerSlot
                                         : HessianStrategy::kPerLogical;
  }
  if (options.translation_dedup && strategy != HessianStrategy::kPerSlot) {
    throw Error("translation dedup requires the per-slot Hessian strategy");
  }
  const int n = circuit.num_slots();
  std::vector<HolePass> plan;
  if (strategy == HessianStrategy::kPerLogical) {
    const auto groups = circuit.slots_of_logical();
    for (std::size_t l = 0; l < groups.size(); ++l) {
      if (groups[l].empty() || groups[l].front() >= n - 1) continue;
      HolePass p{groups[l].front(), static_cast<int>(l), true, {}};
      for (int s = p.start_slot + 1; s < n; ++s) p.partners.push_back({s, 1.0});
      plan.push_back(std::move(p));
    }
    return plan;
  }
  if (!options.translation_dedup) {
    for (int s = 0; s + 1 < n; ++s) {
      HolePass p{s, circuit.slot(s).logical_id, false, {}};
      for (int t = s + 1; t < n; ++t) p.partners.push_back({t, 1.0});
      plan.push_back(std::move(p));
    }
    return plan;
  }
  const auto classes = translation_classes(circuit);
  for (const auto& c : classes) {
    if (plan.empty() || plan.back().start_slot != c.first) {
      plan.push_back({c.first, circuit.slot(c.first).logical_id, false, {}});
    }
    plan.back().partners.push_back({c.second, static_cast<double>(c.multiplicity)});
  }
  return plan;
}

struct Accumulator {
  Complex trace{0.0, 0.0};
  double error_sq = 0.0;
  std::vector<Matrix4c> gradient;
  std::vector<MatrixXc> directed;  // num_logical^2 blocks, (first hole, second hole)
  PassCounts counts;

  void merge(Accumulator&& o) {
    trace += o.trace;
    error_sq += o.error_sq;
    for (std::size_t i = 0; i < gradient.size(); ++i) gradient[i] += o.gradient[i];
    for (std::size_t i = 0; i < directed.size(); ++i) directed[i] += o.directed[i];
    counts += o.counts;
  }
};

struct Workspace {
  PassCache cache;
  StateVectorArray array;
  StateVectorArray scratch;
};

void run_hole_pass(const Circuit& circuit, const HolePass& pass,
                   const std::vector<int>& entries, Workspace& ws, Accumulator& acc) {
  if (pass.partners.empty()) return;
  const int n = circuit.num_slots();
  const int nl = circuit.num_logical();
  const auto& fwd = ws.cache.forward_states;
  const auto& bwd = ws.cache.backward_states;
  const std::uint64_t dim = static_cast<std::uint64_t>(fwd[0].size());
  const std::uint64_t arity = entries.size();
  const int s0 = pass.start_slot;

  hole_apply(fwd[static_cast<std::size_t>(s0)], circuit.slot(s0).targets, ws.array, entries);
  ++acc.counts.hole_applications;
  acc.counts.amplitude_work += dim * arity;

  const int last = pass.partners.back().slot;
  std::size_t pi = 0;
  for (int s = s0 + 1; s <= last; ++s) {
    const GateSlot& slot = circuit.slot(s);
    if (pi < pass.partners.size() && pass.partners[pi].slot == s) {
      const MatrixXc b = hole_contract_array(bwd[static_cast<std::size_t>(n - 1 - s)],
                                             ws.array, slot.targets, entries);
      MatrixXc& dst = acc.directed[static_cast<std::size_t>(pass.logical * nl +
                                                            slot.logical_id)];
      if (pass.partners[pi].weight == 1.0) {
        dst += b;
      } else {
        dst += pass.partners[pi].weight * b;
      }
      ++acc.counts.array_contractions;
      acc.counts.amplitude_work += dim * arity;
      ++pi;
    }
    if (s == last) break;
    apply_gate_to_array(ws.array, circuit.slot_gate(s), ws.scratch);
    std::swap(ws.array, ws.scratch);
    ++acc.counts.array_gate_applications;
    acc.counts.amplitude_work += dim * arity;
    if (pass.fused && slot.logical_id == pass.logical) {
      hole_apply(fwd[static_cast<std::size_t>(s)], slot.targets, ws.array, entries, true);
      ++acc.counts.hole_applications;
      acc.counts.amplitude_work += dim * arity;
    }
  }
}

void restrict_in_place(Matrix4c& m, const std::vector<int>& entries) {
  Matrix4c out = Matrix4c::Zero();
  for (int e : entries) out(e / 4, e % 4) = m(e / 4, e % 4);
  m = out;
}

}  // namespace

void build_pass_cache(const Circuit& circuit, const TargetUnitaryOracle& oracle,
                      std::uint64_t j, PassCache& cache, PassCounts* counts) {
  check_compatible(circuit, oracle);
  const int k = circuit.num_qubits();
  const int n = circuit.num_slots();
  const std::uint64_t dim = std::uint64_t{1} << k;
  if (j >= dim) throw DimensionError("basis index out of range");
  cache.forward_states.resize(static_cast<std::size_t>(n + 1));
  cache.backward_states.resize(static_cast<std::size_t>(n + 1));

  auto& fwd = cache.forward_states;
  fwd[0].reset(k);
  fwd[0][static_cast<Index>(j)] = Complex(1.0, 0.0);
  for (int s = 0; s < n; ++s) {
    apply_gate(fwd[static_cast<std::size_t>(s)], circuit.slot_gate(s),
               fwd[static_cast<std::size_t>(s + 1)]);
  }

  oracle.apply_basis(j, cache.target_column);
  auto& bwd = cache.backward_states;
  bwd[0].reset(k);
  bwd[0].amplitudes() = cache.target_column.amplitudes().conjugate();
  for (int m = 1; m <= n; ++m) {
    apply_gate(bwd[static_cast<std::size_t>(m - 1)], transposed(circuit.slot_gate(n - m)),
               bwd[static_cast<std::size_t>(m)]);
  }
  if (counts) {
    counts->gate_applications += 2 * static_cast<std::uint64_t>(n);
    counts->oracle_applications += 1;
    counts->basis_states += 1;
    counts->amplitude_work += 2 * static_cast<std::uint64_t>(n) * dim;
  }
}

SummandGradient summand_gradient(std::uint64_t j, const Circuit& circuit,
                                 const TargetUnitaryOracle& oracle) {
  PassCache cache;
  SummandGradient out;
  build_pass_cache(circuit, oracle, j, cache, &out.counts);
  const int n = circuit.num_slots();
  const auto& fwd = cache.forward_states;
  const auto& bwd = cache.backward_states;
  out.value = bwd[0].amplitudes().cwiseProduct(fwd[static_cast<std::size_t>(n)].amplitudes()).sum();
  out.slot_derivatives.reserve(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    out.slot_derivatives.push_back(hole_contract(bwd[static_cast<std::size_t>(n - 1 - s)],
                                                 fwd[static_cast<std::size_t>(s)],
                                                 circuit.slot(s).targets));
    ++out.counts.hole_contractions;
    out.counts.amplitude_work += static_cast<std::uint64_t>(fwd[0].size());
  }
  return out;
}

ValueReport evaluate_value(const Circuit& circuit, const TargetUnitaryOracle& oracle,
                           int workers) {
  check_compatible(circuit, oracle);
  const int k = circuit.num_qubits();
  const int n = circuit.num_slots();
  const std::uint64_t dim = std::uint64_t{1} << k;
  struct Partial {
    Complex trace{0.0, 0.0};
    double error_sq = 0.0;
    PassCounts counts;
  };
  Partial total = parallel_reduce<Partial>(
      dim, workers,
      [&](IndexRange r) {
        Partial p;
        StateVector cur(k), next(k), column(k);
        for (std::uint64_t j = r.begin; j < r.end; ++j) {
          cur.reset(k);
          cur[static_cast<Index>(j)] = Complex(1.0, 0.0);
          for (int s = 0; s < n; ++s) {
            apply_gate(cur, circuit.slot_gate(s), next);
            std::swap(cur, next);
          }
          oracle.apply_basis(j, column);
          p.trace += column.amplitudes().dot(cur.amplitudes());
          p.error_sq += (cur.amplitudes() - column.amplitudes()).squaredNorm();
          p.counts.gate_applications += static_cast<std::uint64_t>(n);
          p.counts.oracle_applications += 1;
          p.counts.basis_states += 1;
          p.counts.amplitude_work += static_cast<std::uint64_t>(n) * dim;
        }
        return p;
      },
      [](Partial& a, Partial&& b) {
        a.trace += b.trace;
        a.error_sq += b.error_sq;
        a.counts += b.counts;
      });
  ValueReport out{-total.trace.real(), total.error_sq, total.counts};
  check_trace_bound(out.value, k);
  return out;
}

double target_value(const Circuit& circuit, const TargetUnitaryOracle& oracle, int workers) {
  return evaluate_value(circuit, oracle, workers).value;
}

ObjectiveReport evaluate(const Circuit& circuit, const TargetUnitaryOracle& oracle,
                         const ObjectiveOptions& options, bool with_hessian) {
  check_compatible(circuit, oracle);
  const auto t0 = std::chrono::steady_clock::now();
  const int k = circuit.num_qubits();
  const int n = circuit.num_slots();
  const int nl = circuit.num_logical();
  const std::uint64_t dim = std::uint64_t{1} << k;
  const std::vector<int> entries = structure_entries(options.structure);
  const Index d = static_cast<Index>(entries.size());

  const ProductPoint point = to_components(circuit.logical_gates(), options.structure);
  std::vector<HolePass> plan;
  if (with_hessian) plan = make_hessian_plan(circuit, options);

  Accumulator total = parallel_reduce<Accumulator>(
      dim, options.workers,
      [&](IndexRange r) {
        Accumulator acc;
        acc.gradient.assign(static_cast<std::size_t>(nl), Matrix4c::Zero());
        if (with_hessian) {
          acc.directed.assign(static_cast<std::size_t>(nl) * static_cast<std::size_t>(nl),
                              MatrixXc::Zero(d, d));
        }
        Workspace ws;
        for (std::uint64_t j = r.begin; j < r.end; ++j) {
          build_pass_cache(circuit, oracle, j, ws.cache, &acc.counts);
          const auto& fwd = ws.cache.forward_states;
          const auto& bwd = ws.cache.backward_states;
          const auto& psi_n = fwd[static_cast<std::size_t>(n)].amplitudes();
          acc.trace += bwd[0].amplitudes().cwiseProduct(psi_n).sum();
          acc.error_sq += (psi_n - ws.cache.target_column.amplitudes()).squaredNorm();
          for (int s = 0; s < n; ++s) {
            acc.gradient[static_cast<std::size_t>(circuit.slot(s).logical_id)] +=
                hole_contract(bwd[static_cast<std::size_t>(n - 1 - s)],
                              fwd[static_cast<std::size_t>(s)], circuit.slot(s).targets);
          }
          acc.counts.hole_contractions += static_cast<std::uint64_t>(n);
          acc.counts.amplitude_work += static_cast<std::uint64_t>(n) * dim;
          for (const auto& pass : plan) run_hole_pass(circuit, pass, entries, ws, acc);
        }
        return acc;
      },
      [](Accumulator& a, Accumulator&& b) { a.merge(std::move(b)); });

  ObjectiveReport report;
  report.value = -total.trace.real();
  check_trace_bound(report.value, k);
  report.error_sq = total.error_sq;
  report.holomorphic_gradient = std::move(total.gradient);
  std::vector<Matrix4c> euclid(report.holomorphic_gradient.size());
  for (std::size_t l = 0; l < euclid.size(); ++l) {
    euclid[l] = euclid_gradient_from_holomorphic(report.holomorphic_gradient[l]);
  }
  report.euclidean_gradient = restrict_to_components(euclid, options.structure);
  report.riemannian_gradient = project_tangent(point, report.euclidean_gradient);
  if (with_hessian) {
    HessianBlocks h(nl, entries);
    for (int a = 0; a < nl; ++a) {
      for (int b = a; b < nl; ++b) {
        const auto& ab = total.directed[static_cast<std::size_t>(a * nl + b)];
        const auto& ba = total.directed[static_cast<std::size_t>(b * nl + a)];
        h.block(a, b) = ab + ba.transpose();
      }
    }
    report.hessian = std::move(h);
  }
  report.counts = total.counts;
  report.seconds = seconds_since(t0);
  return report;
}

ObjectiveReport full_gradient(const Circuit& circuit, const TargetUnitaryOracle& oracle,
                              const ObjectiveOptions& options) {
  return evaluate(circuit, oracle, options, false);
}

HessianBlocks full_hessian(const Circuit& circuit, const TargetUnitaryOracle& oracle,
                           const ObjectiveOptions& options) {
  return std::move(*evaluate(circuit, oracle, options, true).hessian);
}

std::vector<Matrix4c> hessian_vector_product(const Circuit& circuit,
                                             const TargetUnitaryOracle& oracle,
                                             const std::vector<Matrix4c>& directions,
                                             const ObjectiveOptions& options) {
  check_compatible(circuit, oracle);
  const int k = circuit.num_qubits();
  const int n = circuit.num_slots();
  const int nl = circuit.num_logical();
  if (static_cast<int>(directions.size()) != nl) {
    throw DimensionError("hessian_vector_product: one direction per logical gate");
  }
  const std::vector<int> entries = structure_entries(options.structure);
  std::vector<Matrix4c> z = directions;
  for (auto& m : z) restrict_in_place(m, entries);
  const std::uint64_t dim = std::uint64_t{1} << k;

  struct Partial {
    std::vector<Matrix4c> out;
  };
  Partial total = parallel_reduce<Partial>(
      dim, options.workers,
      [&](IndexRange r) {
        Partial p{std::vector<Matrix4c>(static_cast<std::size_t>(nl), Matrix4c::Zero())};
        PassCache cache;
        std::vector<StateVector> dpsi(static_cast<std::size_t>(n + 1));
        StateVector t1(k), t2(k), dphi(k), dphi_next(k);
        for (std::uint64_t j = r.begin; j < r.end; ++j) {
          build_pass_cache(circuit, oracle, j, cache);
          const auto& fwd = cache.forward_states;
          const auto& bwd = cache.backward_states;
          // Forward tangent: dpsi[s+1] = G_s dpsi[s] + Z_s psi[s].
          dpsi[0].reset(k);
          for (int s = 0; s < n; ++s) {
            const Gate g = circuit.slot_gate(s);
            const Gate zg{z[static_cast<std::size_t>(circuit.slot(s).logical_id)],
                          g.targets, false};
            apply_gate(dpsi[static_cast<std::size_t>(s)], g, t1);
            apply_gate(fwd[static_cast<std::size_t>(s)], zg, t2);
            auto& next = dpsi[static_cast<std::size_t>(s + 1)];
            if (next.num_qubits() != k) next.reset(k);
            next.amplitudes() = t1.amplitudes() + t2.amplitudes();
          }
          // Backward tangent, consumed on the fly: dphi_m for m = 0..n-1.
          dphi.reset(k);
          for (int m = 0; m < n; ++m) {
            const int s = n - 1 - m;  // slot whose gradient uses phi_m
            Matrix4c h = hole_contract(bwd[static_cast<std::size_t>(m)],
                                       dpsi[static_cast<std::size_t>(s)],
                                       circuit.slot(s).targets) +
                         hole_contract(dphi, fwd[static_cast<std::size_t>(s)],
                                       circuit.slot(s).targets);
            p.out[static_cast<std::size_t>(circuit.slot(s).logical_id)] += h;
            if (m + 1 < n) {
              const Gate gt = transposed(circuit.slot_gate(s));
              const Gate zt{z[static_cast<std::size_t>(circuit.slot(s).logical_id)].transpose(),
                            circuit.slot(s).targets, false};
              apply_gate(dphi, gt, t1);
              apply_gate(bwd[static_cast<std::size_t>(m)], zt, t2);
              dphi_next.amplitudes() = t1.amplitudes() + t2.amplitudes();
              std::swap(dphi, dphi_next);
            }
          }
        }
        return p;
      },
      [](Partial& a, Partial&& b) {
        for (std::size_t i = 0; i < a.out.size(); ++i) a.out[i] += b.out[i];
      });
  for (auto& m : total.out) restrict_in_place(m, entries);
  return total.out;
}

std::uint64_t hessian_pair_count(const Circuit& circuit, const ObjectiveOptions& options) {
  std::uint64_t count = 0;
  for (const auto& pass : make_hessian_plan(circuit, options)) count += pass.partners.size();
  return count;
}

}  // namespace rqco

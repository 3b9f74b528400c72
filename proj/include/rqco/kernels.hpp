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

// Statevector contraction kernels: two-qubit gate application, gate-hole
// contraction (gradient environment) and gate-hole application (statevector
// array of first derivatives), plus their statevector-array counterparts.
//
// Qubit 0 is the most significant index bit. A gate on targets (a, b) uses the
// local basis index 2*b(a) + b(b). Targets with a > b are normalized
// internally by swapping the gate wires, so callers may pass either order.
//
// Gate entries are addressed in row-major order: entry e = 4*i + j is G(i, j).

#ifndef RQCO_KERNELS_HPP_
#define RQCO_KERNELS_HPP_

#include <algorithm>
#include <array>
#include <span>
#include <vector>

#include "rqco/types.hpp"

namespace rqco {

enum class LoopOrder {
  kStreaming,   // gate entries in the middle loops, statevector stream inside
  kGateKernel,  // 4x4 gate multiplication as the innermost unrolled kernel
};

inline constexpr std::array<int, 16> kAllEntries = {
    0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};

// On-pattern entries of a parity-conserving gate: the odd block (rows/cols
// {1,2}) row-major, then the even block (rows/cols {0,3}) row-major.
inline constexpr std::array<int, 8> kParityEntries = {5, 6, 9, 10, 0, 3, 12, 15};

namespace detail {

inline constexpr int swap_bits2(int x) { return ((x & 1) << 1) | (x >> 1); }

inline constexpr int swap_entry(int e) {
  return 4 * swap_bits2(e / 4) + swap_bits2(e % 4);
}

// Statevector legs around two sorted targets q1 < q2: index
// (((i0*2 + b1)*middle + i2)*2 + b3)*inner + i4.
struct TargetLayout {
  Index outer = 1;
  Index middle = 1;
  Index inner = 1;
  bool adjacent = true;

  Index stride_first() const { return 2 * middle * inner; }
  Index stride_second() const { return inner; }
  Index base(Index i0, Index i2, Index i4) const {
    return (i0 * 4 * middle + i2 * 2) * inner + i4;
  }
  std::array<Index, 4> offsets() const {
    return {0, stride_second(), stride_first(), stride_first() + stride_second()};
  }
};

struct NormalizedTargets {
  QubitPair sorted;
  bool swapped = false;
};

inline NormalizedTargets normalize_targets(int num_qubits, QubitPair t) {
  if (t.first < 0 || t.second < 0 || t.first >= num_qubits ||
      t.second >= num_qubits) {
    throw DimensionError("gate target out of range");
  }
  if (t.first == t.second) throw DimensionError("duplicate gate targets");
  if (t.first < t.second) return {t, false};
  return {{t.second, t.first}, true};
}

inline TargetLayout make_layout(int num_qubits, QubitPair sorted) {
  TargetLayout lay;
  lay.outer = Index{1} << sorted.first;
  lay.middle = Index{1} << (sorted.second - sorted.first - 1);
  lay.inner = Index{1} << (num_qubits - sorted.second - 1);
  lay.adjacent = sorted.second == sorted.first + 1;
  return lay;
}

template <typename Scalar>
Matrix4<Scalar> swap_wires(const Matrix4<Scalar>& g) {
  Matrix4<Scalar> out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out(swap_bits2(i), swap_bits2(j)) = g(i, j);
  }
  return out;
}

template <typename Scalar>
std::array<Scalar, 16> row_major(const Matrix4<Scalar>& g) {
  std::array<Scalar, 16> a;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) a[4 * i + j] = g(i, j);
  }
  return a;
}

inline std::vector<int> sorted_entries(std::span<const int> entries, bool swapped) {
  std::vector<int> out(entries.begin(), entries.end());
  for (int& e : out) {
    if (e < 0 || e > 15) throw DimensionError("gate entry index out of range");
    if (swapped) e = swap_entry(e);
  }
  return out;
}

// y_r = sum_j g[4r + j] x_j over four strided streams, `Arity` interleaved
// slots per position (Arity == 0 reads the arity at run time). With `Parity`
// the eight off-pattern entries are skipped.
template <int Arity, bool Parity = false, typename Scalar>
void gate_kernel(const Scalar* in, Scalar* out, const TargetLayout& lay,
                 const std::array<Scalar, 16>& g, Index runtime_arity) {
  const Index arity = Arity > 0 ? Arity : runtime_arity;
  const auto off = lay.offsets();
  const Index o1 = off[1] * arity, o2 = off[2] * arity, o3 = off[3] * arity;
  auto body = [&](Index p) {
    for (Index a = 0; a < arity; ++a) {
      const Scalar x0 = in[p + a], x1 = in[p + o1 + a], x2 = in[p + o2 + a],
                   x3 = in[p + o3 + a];
      Scalar y[4];
      if constexpr (Parity) {
        y[0] = g[0] * x0 + g[3] * x3;
        y[1] = g[5] * x1 + g[6] * x2;
        y[2] = g[9] * x1 + g[10] * x2;
        y[3] = g[12] * x0 + g[15] * x3;
      } else {
        for (int k = 0; k < 4; ++k) {
          y[k] = Scalar(0);
          y[k] += g[4 * k + 0] * x0;
          y[k] += g[4 * k + 1] * x1;
          y[k] += g[4 * k + 2] * x2;
          y[k] += g[4 * k + 3] * x3;
        }
      }
      out[p + a] = y[0];
      out[p + o1 + a] = y[1];
      out[p + o2 + a] = y[2];
      out[p + o3 + a] = y[3];
    }
  };
  if (lay.adjacent) {
    for (Index i0 = 0; i0 < lay.outer; ++i0) {
      for (Index i2 = 0; i2 < lay.inner; ++i2) {
        body(((i0 * 4) * lay.inner + i2) * arity);
      }
    }
  } else {
    for (Index i0 = 0; i0 < lay.outer; ++i0) {
      for (Index i2 = 0; i2 < lay.middle; ++i2) {
        for (Index i4 = 0; i4 < lay.inner; ++i4) {
          body(lay.base(i0, i2, i4) * arity);
        }
      }
    }
  }
}

// Output-row / input-column / stream ordering: for every output local index
// and every input local index, stream over the environment.
template <typename Scalar>
void gate_streaming(const Scalar* in, Scalar* out, Index size,
                    const TargetLayout& lay, const std::array<Scalar, 16>& g) {
  std::fill(out, out + size, Scalar(0));
  if (lay.adjacent) {
    const Index n = lay.inner;
    for (Index i0 = 0; i0 < lay.outer; ++i0) {
      for (int i1 = 0; i1 < 4; ++i1) {
        for (int j = 0; j < 4; ++j) {
          const Scalar gij = g[4 * i1 + j];
          Scalar* dst = out + (i0 * 4 + i1) * n;
          const Scalar* src = in + (i0 * 4 + j) * n;
          for (Index i2 = 0; i2 < n; ++i2) dst[i2] += gij * src[i2];
        }
      }
    }
    return;
  }
  const auto off = lay.offsets();
  for (Index i0 = 0; i0 < lay.outer; ++i0) {
    for (int r = 0; r < 4; ++r) {
      for (int j = 0; j < 4; ++j) {
        const Scalar gij = g[4 * r + j];
        for (Index i2 = 0; i2 < lay.middle; ++i2) {
          const Index b = lay.base(i0, i2, 0);
          Scalar* dst = out + b + off[r];
          const Scalar* src = in + b + off[j];
          for (Index i4 = 0; i4 < lay.inner; ++i4) dst[i4] += gij * src[i4];
        }
      }
    }
  }
}

template <typename Fn>
void for_each_environment(const TargetLayout& lay, Fn&& fn) {
  if (lay.adjacent) {
    for (Index i0 = 0; i0 < lay.outer; ++i0) {
      for (Index i2 = 0; i2 < lay.inner; ++i2) fn((i0 * 4) * lay.inner + i2);
    }
    return;
  }
  for (Index i0 = 0; i0 < lay.outer; ++i0) {
    for (Index i2 = 0; i2 < lay.middle; ++i2) {
      for (Index i4 = 0; i4 < lay.inner; ++i4) fn(lay.base(i0, i2, i4));
    }
  }
}

// Parity-sparse gates take the 8-term path. The flag is checked against the
// matrix so a mislabelled gate cannot silently drop entries.
template <typename Scalar>
bool use_parity_path(const BasicGate<Scalar>& gate) {
  if (!gate.parity_sparse) return false;
  for (int e : {1, 2, 4, 7, 8, 11, 13, 14}) {
    if (gate.matrix(e / 4, e % 4) != Scalar(0)) {
      throw DimensionError("gate flagged parity-sparse has off-pattern entries");
    }
  }
  return true;
}

template <bool Parity, typename Scalar>
void dispatch_arity(const BasicStateVectorArray<Scalar>& in, BasicStateVectorArray<Scalar>& out,
                    const TargetLayout& lay, const std::array<Scalar, 16>& g) {
  switch (in.arity()) {
    case 16:
      gate_kernel<16, Parity>(in.data(), out.data(), lay, g, 16);
      break;
    case 8:
      gate_kernel<8, Parity>(in.data(), out.data(), lay, g, 8);
      break;
    case 1:
      gate_kernel<1, Parity>(in.data(), out.data(), lay, g, 1);
      break;
    default:
      gate_kernel<0, Parity>(in.data(), out.data(), lay, g, in.arity());
  }
}

}  // namespace detail

// out = gate applied to `in`. `out` is resized if needed and must not alias
// `in`. Both loop orders accumulate each output amplitude in the same order
// and therefore give identical bits.
template <typename Scalar>
void apply_gate(const BasicStateVector<Scalar>& in,
                const BasicGate<Scalar>& gate, BasicStateVector<Scalar>& out,
                LoopOrder order = LoopOrder::kGateKernel) {
  if (&in == &out) throw DimensionError("apply_gate output aliases input");
  const auto nt = detail::normalize_targets(in.num_qubits(), gate.targets);
  const auto lay = detail::make_layout(in.num_qubits(), nt.sorted);
  const auto g = detail::row_major<Scalar>(
      nt.swapped ? detail::swap_wires<Scalar>(gate.matrix) : gate.matrix);
  if (out.num_qubits() != in.num_qubits() || out.size() != in.size()) {
    out.reset(in.num_qubits());
  }
  if (order == LoopOrder::kStreaming) {
    detail::gate_streaming(in.data(), out.data(), in.size(), lay, g);
  } else if (detail::use_parity_path(gate)) {
    detail::gate_kernel<1, true>(in.data(), out.data(), lay, g, 1);
  } else {
    detail::gate_kernel<1>(in.data(), out.data(), lay, g, 1);
  }
}

template <typename Scalar>
BasicStateVector<Scalar> apply_gate(const BasicStateVector<Scalar>& in,
                                    const BasicGate<Scalar>& gate,
                                    LoopOrder order = LoopOrder::kGateKernel) {
  BasicStateVector<Scalar> out(in.num_qubits());
  apply_gate(in, gate, out, order);
  return out;
}

// Same gate on every logical vector of the array; layout is preserved.
template <typename Scalar>
void apply_gate_to_array(const BasicStateVectorArray<Scalar>& in,
                         const BasicGate<Scalar>& gate,
                         BasicStateVectorArray<Scalar>& out) {
  if (&in == &out) throw DimensionError("apply_gate_to_array output aliases input");
  const auto nt = detail::normalize_targets(in.num_qubits(), gate.targets);
  const auto lay = detail::make_layout(in.num_qubits(), nt.sorted);
  const auto g = detail::row_major<Scalar>(
      nt.swapped ? detail::swap_wires<Scalar>(gate.matrix) : gate.matrix);
  if (out.num_qubits() != in.num_qubits() || out.arity() != in.arity()) {
    out.reset(in.num_qubits(), in.arity());
  }
  if (detail::use_parity_path(gate)) {
    detail::dispatch_arity<true>(in, out, lay, g);
  } else {
    detail::dispatch_arity<false>(in, out, lay, g);
  }
}

template <typename Scalar>
BasicStateVectorArray<Scalar> apply_gate_to_array(
    const BasicStateVectorArray<Scalar>& in, const BasicGate<Scalar>& gate) {
  BasicStateVectorArray<Scalar> out(in.num_qubits(), in.arity());
  apply_gate_to_array(in, gate, out);
  return out;
}

// D(i, j) = sum over the environment of bra[env, i] * ket[env, j]. The bra is
// not conjugated, so sum_ij G(i, j) D(i, j) = bra^T (G ket).
template <typename Scalar>
Matrix4<Scalar> hole_contract(const BasicStateVector<Scalar>& bra,
                              const BasicStateVector<Scalar>& ket,
                              QubitPair targets) {
  if (bra.num_qubits() != ket.num_qubits() || bra.size() != ket.size()) {
    throw DimensionError("hole_contract: bra and ket dimensions differ");
  }
  const auto nt = detail::normalize_targets(ket.num_qubits(), targets);
  const auto lay = detail::make_layout(ket.num_qubits(), nt.sorted);
  const auto off = lay.offsets();
  const Scalar* x = ket.data();
  const Scalar* y = bra.data();
  std::array<Scalar, 16> acc;
  acc.fill(Scalar(0));
  detail::for_each_environment(lay, [&](Index p) {
    const Scalar x0 = x[p + off[0]], x1 = x[p + off[1]], x2 = x[p + off[2]],
                 x3 = x[p + off[3]];
    for (int i = 0; i < 4; ++i) {
      const Scalar yi = y[p + off[i]];
      acc[4 * i + 0] += yi * x0;
      acc[4 * i + 1] += yi * x1;
      acc[4 * i + 2] += yi * x2;
      acc[4 * i + 3] += yi * x3;
    }
  });
  Matrix4<Scalar> d;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      d(i, j) = nt.swapped ? acc[4 * detail::swap_bits2(i) + detail::swap_bits2(j)]
                           : acc[4 * i + j];
    }
  }
  return d;
}

// Writes (or adds, when `accumulate`) the gate hole applied to `state`: slot a
// of the output holds d(G state)/dG[entries[a]]. Contracting the slots with
// the matching gate entries reproduces apply_gate(state, G).
template <typename Scalar>
void hole_apply(const BasicStateVector<Scalar>& state, QubitPair targets,
                BasicStateVectorArray<Scalar>& out,
                std::span<const int> entries = kAllEntries,
                bool accumulate = false) {
  const auto nt = detail::normalize_targets(state.num_qubits(), targets);
  const auto lay = detail::make_layout(state.num_qubits(), nt.sorted);
  const auto sorted = detail::sorted_entries(entries, nt.swapped);
  const Index arity = static_cast<Index>(sorted.size());
  if (accumulate) {
    if (out.num_qubits() != state.num_qubits() || out.arity() != arity) {
      throw DimensionError("hole_apply: accumulation target has wrong shape");
    }
  } else if (out.num_qubits() != state.num_qubits() || out.arity() != arity) {
    out.reset(state.num_qubits(), static_cast<int>(arity));
  } else {
    out.amplitudes().setZero();
  }
  const auto off = lay.offsets();
  const Scalar* x = state.data();
  Scalar* dst = out.data();
  detail::for_each_environment(lay, [&](Index p) {
    for (Index a = 0; a < arity; ++a) {
      const int e = sorted[static_cast<std::size_t>(a)];
      dst[(p + off[e / 4]) * arity + a] += x[p + off[e % 4]];
    }
  });
}

template <typename Scalar>
BasicStateVectorArray<Scalar> hole_apply(const BasicStateVector<Scalar>& state,
                                         QubitPair targets,
                                         std::span<const int> entries = kAllEntries) {
  BasicStateVectorArray<Scalar> out;
  hole_apply(state, targets, out, entries);
  return out;
}

// B(a, c) = hole_contract(bra, logical slot a of ket_array)[entries[c]].
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> hole_contract_array(
    const BasicStateVector<Scalar>& bra,
    const BasicStateVectorArray<Scalar>& ket_array, QubitPair targets,
    std::span<const int> entries = kAllEntries) {
  if (bra.num_qubits() != ket_array.num_qubits()) {
    throw DimensionError("hole_contract_array: dimensions differ");
  }
  const auto nt = detail::normalize_targets(bra.num_qubits(), targets);
  const auto lay = detail::make_layout(bra.num_qubits(), nt.sorted);
  const auto sorted = detail::sorted_entries(entries, nt.swapped);
  const Index arity = ket_array.arity();
  const Index cols = static_cast<Index>(sorted.size());
  const auto off = lay.offsets();
  // acc(a, c) column-major so the arity index runs fastest.
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> acc =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(arity, cols);
  const Scalar* y = bra.data();
  const Scalar* x = ket_array.data();
  Scalar* accp = acc.data();
  detail::for_each_environment(lay, [&](Index p) {
    const Scalar ys[4] = {y[p + off[0]], y[p + off[1]], y[p + off[2]],
                          y[p + off[3]]};
    for (Index c = 0; c < cols; ++c) {
      const int e = sorted[static_cast<std::size_t>(c)];
      const Scalar yi = ys[e / 4];
      const Scalar* xs = x + (p + off[e % 4]) * arity;
      Scalar* dst = accp + c * arity;
      for (Index a = 0; a < arity; ++a) dst[a] += yi * xs[a];
    }
  });
  return acc;
}

}  // namespace rqco

#endif  // RQCO_KERNELS_HPP_

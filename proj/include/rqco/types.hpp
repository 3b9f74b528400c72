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

#ifndef RQCO_TYPES_HPP_
#define RQCO_TYPES_HPP_

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rqco {

using Complex = std::complex<double>;
using Index = Eigen::Index;

template <typename Scalar>
using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;
using Matrix4c = Matrix4<Complex>;

// Error raised for shape, range and topology violations.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Two target qubits of a gate. The gate matrix index is 2*b(first) + b(second),
// where b(q) is the bit value of qubit q.
struct QubitPair {
  int first = 0;
  int second = 1;

  friend bool operator==(const QubitPair&, const QubitPair&) = default;
};

// Dense statevector over k qubits.
//
// Basis ordering is lexicographic with qubit 0 as the MOST significant bit:
// the amplitude of |b_0 b_1 ... b_{k-1}> lives at index
// b_0 * 2^(k-1) + b_1 * 2^(k-2) + ... + b_{k-1}. Many simulators use the
// opposite convention; every kernel in this library assumes this one.
template <typename Scalar>
class BasicStateVector {
 public:
  using Storage = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicStateVector() = default;
  explicit BasicStateVector(int num_qubits) { reset(num_qubits); }
  BasicStateVector(int num_qubits, Storage amplitudes)
      : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != (Index{1} << num_qubits)) {
      throw DimensionError("statevector length must be 2^num_qubits");
    }
  }

  static BasicStateVector basis(int num_qubits, std::uint64_t index) {
    BasicStateVector v(num_qubits);
    if (index >= static_cast<std::uint64_t>(v.size())) {
      throw DimensionError("basis index out of range");
    }
    v.amplitudes_[static_cast<Index>(index)] = Scalar(1);
    return v;
  }

  // Zero-filled resize; keeps the allocation when the size is unchanged.
  void reset(int num_qubits) {
    if (num_qubits < 0 || num_qubits > 40) {
      throw DimensionError("unsupported qubit count");
    }
    num_qubits_ = num_qubits;
    amplitudes_.setZero(Index{1} << num_qubits);
  }

  int num_qubits() const { return num_qubits_; }
  Index size() const { return amplitudes_.size(); }

  Storage& amplitudes() { return amplitudes_; }
  const Storage& amplitudes() const { return amplitudes_; }
  Scalar* data() { return amplitudes_.data(); }
  const Scalar* data() const { return amplitudes_.data(); }
  std::span<Scalar> span() { return {data(), static_cast<std::size_t>(size())}; }
  std::span<const Scalar> span() const {
    return {data(), static_cast<std::size_t>(size())};
  }

  Scalar& operator[](Index i) { return amplitudes_[i]; }
  const Scalar& operator[](Index i) const { return amplitudes_[i]; }

 private:
  int num_qubits_ = 0;
  Storage amplitudes_;
};

// `arity` logical statevectors stored interleaved: entry (index, slot) sits at
// index * arity + slot, so the slot index runs fastest.
template <typename Scalar>
class BasicStateVectorArray {
 public:
  using Storage = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using LogicalView =
      Eigen::Map<Storage, Eigen::Unaligned, Eigen::InnerStride<Eigen::Dynamic>>;
  using ConstLogicalView = Eigen::Map<const Storage, Eigen::Unaligned,
                                      Eigen::InnerStride<Eigen::Dynamic>>;

  BasicStateVectorArray() = default;
  BasicStateVectorArray(int num_qubits, int arity) { reset(num_qubits, arity); }

  static BasicStateVectorArray broadcast(const BasicStateVector<Scalar>& v,
                                         int arity) {
    BasicStateVectorArray a(v.num_qubits(), arity);
    for (int s = 0; s < arity; ++s) a.logical(s) = v.amplitudes();
    return a;
  }

  void reset(int num_qubits, int arity) {
    if (arity < 1) throw DimensionError("array arity must be positive");
    if (num_qubits < 0 || num_qubits > 40) {
      throw DimensionError("unsupported qubit count");
    }
    num_qubits_ = num_qubits;
    arity_ = arity;
    amplitudes_.setZero((Index{1} << num_qubits) * arity);
  }

  int num_qubits() const { return num_qubits_; }
  int arity() const { return arity_; }
  Index dimension() const { return Index{1} << num_qubits_; }

  Storage& amplitudes() { return amplitudes_; }
  const Storage& amplitudes() const { return amplitudes_; }
  Scalar* data() { return amplitudes_.data(); }
  const Scalar* data() const { return amplitudes_.data(); }

  LogicalView logical(int slot) {
    return LogicalView(amplitudes_.data() + slot, dimension(),
                       Eigen::InnerStride<Eigen::Dynamic>(arity_));
  }
  ConstLogicalView logical(int slot) const {
    return ConstLogicalView(amplitudes_.data() + slot, dimension(),
                            Eigen::InnerStride<Eigen::Dynamic>(arity_));
  }

 private:
  int num_qubits_ = 0;
  int arity_ = 1;
  Storage amplitudes_;
};

template <typename Scalar>
struct BasicGate {
  Matrix4<Scalar> matrix = Matrix4<Scalar>::Identity();
  QubitPair targets;
  bool parity_sparse = false;
};

using StateVector = BasicStateVector<Complex>;
using StateVectorArray = BasicStateVectorArray<Complex>;
using Gate = BasicGate<Complex>;

}  // namespace rqco

#endif  // RQCO_TYPES_HPP_

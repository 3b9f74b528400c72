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

#include "rqco/models.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "rqco/kernels.hpp"

namespace rqco {

namespace {

QubitPair ordered(QubitPair p) {
  return p.first < p.second ? p : QubitPair{p.second, p.first};
}

// Adds `term`, merging it into an existing term with the same operator and
// (unordered) sites.
void add_term(std::vector<HamiltonianTerm>& terms, HamiltonianTerm term) {
  for (auto& t : terms) {
    if (t.op == term.op && ordered(t.sites) == ordered(term.sites)) {
      t.coefficient += term.coefficient;
      return;
    }
  }
  terms.push_back(term);
}

void check_sites(int num_sites) {
  if (num_sites < 2) throw Error("Fermi-Hubbard chain needs at least 2 sites");
}

int max_group(const std::vector<HamiltonianTerm>& terms) {
  int g = 0;
  for (const auto& t : terms) g = std::max(g, t.group);
  return g;
}

}  // namespace

Matrix4c two_site_matrix(TwoSiteOperator op) {
  Matrix4c m = Matrix4c::Zero();
  if (op == TwoSiteOperator::kHopping) {
    m(1, 2) = m(2, 1) = 1.0;
  } else {
    m(3, 3) = 1.0;
  }
  return m;
}

HamiltonianSpec build_spinless_fh(int num_sites, double J, double U, bool periodic) {
  check_sites(num_sites);
  HamiltonianSpec spec;
  spec.kind = ModelKind::kSpinless;
  spec.num_sites = num_sites;
  spec.num_qubits = num_sites;
  spec.periodic = periodic;
  spec.J = J;
  spec.U = U;
  // Keep hopping terms even for J = 0 so the term list has a fixed shape.
  const int bonds = periodic ? num_sites : num_sites - 1;
  for (int a = 0; a < bonds; ++a) {
    const QubitPair sites{a, (a + 1) % num_sites};
    const int group = (a == num_sites - 1 && num_sites % 2 == 1) ? 2 : a % 2;
    add_term(spec.terms, {-J, TwoSiteOperator::kHopping, sites, group});
    add_term(spec.terms, {U, TwoSiteOperator::kDensityDensity, sites, group});
  }
  spec.num_groups = max_group(spec.terms) + 1;
  return spec;
}

HamiltonianSpec build_spinful_fh(int num_sites, double J, double U, bool periodic) {
  check_sites(num_sites);
  HamiltonianSpec spec;
  spec.kind = ModelKind::kSpinful;
  spec.num_sites = num_sites;
  spec.num_qubits = 2 * num_sites;
  spec.periodic = periodic;
  spec.J = J;
  spec.U = U;
  const int L = num_sites;
  const int bonds = periodic ? L : L - 1;
  for (int chain = 0; chain < 2; ++chain) {
    for (int a = 0; a < bonds; ++a) {
      const QubitPair sites{chain * L + a, chain * L + (a + 1) % L};
      const int group = (a == L - 1 && L % 2 == 1) ? 3 : a % 2;
      add_term(spec.terms, {-J, TwoSiteOperator::kHopping, sites, group});
    }
  }
  for (int j = 0; j < L; ++j) {
    add_term(spec.terms, {U, TwoSiteOperator::kDensityDensity, {j, j + L}, 2});
  }
  spec.num_groups = max_group(spec.terms) + 1;
  return spec;
}

Matrix4c local_hamiltonian(double J, double U) {
  return -J * two_site_matrix(TwoSiteOperator::kHopping) +
         U * two_site_matrix(TwoSiteOperator::kDensityDensity);
}

Gate trotter_gate(double J, double U, double t, QubitPair targets) {
  Matrix4c g = Matrix4c::Zero();
  const double c = std::cos(J * t), s = std::sin(J * t);
  g(0, 0) = 1.0;
  g(1, 1) = g(2, 2) = c;
  g(1, 2) = g(2, 1) = Complex(0.0, s);
  g(3, 3) = std::exp(Complex(0.0, -t * U));
  return Gate{g, targets, true};
}

TrotterPlan make_trotter_plan(int num_groups, int order, int steps, double total_time) {
  if (num_groups < 1) throw Error("Trotter plan needs at least one term group");
  if (steps < 1) throw Error("Trotter plan needs at least one step");
  if (order != 1 && order != 2 && order != 4) throw Error("unsupported Trotter order");
  TrotterPlan plan{order, steps, total_time, {}};
  std::vector<TrotterLayer> raw;
  auto strang = [&](double tau) {
    for (int g = 0; g + 1 < num_groups; ++g) raw.push_back({g, tau / 2});
    raw.push_back({num_groups - 1, tau});
    for (int g = num_groups - 2; g >= 0; --g) raw.push_back({g, tau / 2});
  };
  const double tau = total_time / steps;
  const double u = 1.0 / (4.0 - std::cbrt(4.0));
  for (int step = 0; step < steps; ++step) {
    if (order == 1) {
      for (int g = 0; g < num_groups; ++g) raw.push_back({g, tau});
    } else if (order == 2) {
      strang(tau);
    } else {
      strang(u * tau);
      strang(u * tau);
      strang((1.0 - 4.0 * u) * tau);
      strang(u * tau);
      strang(u * tau);
    }
  }
  for (const auto& l : raw) {
    if (!plan.layers.empty() && plan.layers.back().group == l.group) {
      plan.layers.back().time += l.time;
    } else {
      plan.layers.push_back(l);
    }
  }
  return plan;
}

Circuit build_trotter_circuit(const HamiltonianSpec& spec, const TrotterPlan& plan) {
  // Per group: bonds in order of appearance with their (hopping, nn) coefficients.
  struct Bond {
    QubitPair sites;
    double hop = 0.0;
    double nn = 0.0;
  };
  std::vector<std::vector<Bond>> groups(static_cast<std::size_t>(spec.num_groups));
  for (const auto& t : spec.terms) {
    if (t.group < 0 || t.group >= spec.num_groups) throw Error("term group out of range");
    auto& g = groups[static_cast<std::size_t>(t.group)];
    auto it = std::find_if(g.begin(), g.end(), [&](const Bond& b) {
      return ordered(b.sites) == ordered(t.sites);
    });
    if (it == g.end()) {
      g.push_back({t.sites, 0.0, 0.0});
      it = g.end() - 1;
    }
    (t.op == TwoSiteOperator::kHopping ? it->hop : it->nn) += t.coefficient;
  }
  for (const auto& g : groups) {
    for (const auto& b : g) {
      if (b.hop != g.front().hop || b.nn != g.front().nn) {
        throw Error("Trotter layer needs identical terms on all bonds of a group");
      }
    }
  }

  std::vector<TrotterLayer> layers;
  for (const auto& l : plan.layers) {
    if (l.group < 0 || l.group >= spec.num_groups) throw Error("plan group out of range");
    if (groups[static_cast<std::size_t>(l.group)].empty()) continue;
    if (!layers.empty() && layers.back().group == l.group) {
      layers.back().time += l.time;
    } else {
      layers.push_back(l);
    }
  }

  std::vector<Matrix4c> gates;
  std::vector<std::vector<QubitPair>> bonds;
  bool alternating = true;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& g = groups[static_cast<std::size_t>(layers[i].group)];
    gates.push_back(trotter_gate(-g.front().hop, g.front().nn, layers[i].time).matrix);
    std::vector<QubitPair> pairs;
    for (const auto& b : g) pairs.push_back(b.sites);
    bonds.push_back(std::move(pairs));
    alternating = alternating && layers[i].group == static_cast<int>(i % 2);
  }

  const int L = spec.num_sites;
  if (spec.kind == ModelKind::kSpinless && alternating && L % 2 == 0 &&
      (!spec.periodic || L >= 4)) {
    return build_brickwall(L, static_cast<int>(gates.size()), gates, spec.periodic);
  }
  return build_layered(spec.num_qubits, bonds, gates);
}

void hamiltonian_apply(const HamiltonianSpec& spec, const StateVector& in, StateVector& out) {
  if (in.num_qubits() != spec.num_qubits) throw DimensionError("hamiltonian_apply: size mismatch");
  if (&in == &out) throw DimensionError("hamiltonian_apply output aliases input");
  out.reset(spec.num_qubits);
  StateVector scratch(spec.num_qubits);
  for (const auto& t : spec.terms) {
    apply_gate(in, Gate{two_site_matrix(t.op), t.sites, true}, scratch);
    out.amplitudes() += t.coefficient * scratch.amplitudes();
  }
}

StateVector hamiltonian_apply(const HamiltonianSpec& spec, const StateVector& in) {
  StateVector out(spec.num_qubits);
  hamiltonian_apply(spec, in, out);
  return out;
}

MatrixXc dense_hamiltonian(const HamiltonianSpec& spec) {
  if (spec.num_qubits > kDenseQubitCap) throw Error("dense Hamiltonian above the size cap");
  const Index dim = Index{1} << spec.num_qubits;
  MatrixXc h(dim, dim);
  StateVector col(spec.num_qubits);
  for (Index j = 0; j < dim; ++j) {
    hamiltonian_apply(spec, StateVector::basis(spec.num_qubits, static_cast<std::uint64_t>(j)),
                      col);
    h.col(j) = col.amplitudes();
  }
  return h;
}

KrylovOracle::KrylovOracle(HamiltonianSpec spec, double t, double tolerance, int max_dimension)
    : spec_(std::move(spec)), t_(t), tolerance_(tolerance), max_dimension_(max_dimension) {
  if (max_dimension_ < 1) throw Error("Krylov subspace dimension must be positive");
}

void KrylovOracle::apply(const StateVector& in, StateVector& out) const { evolve(in, t_, out); }

void KrylovOracle::apply_adjoint(const StateVector& in, StateVector& out) const {
  evolve(in, -t_, out);
}

void KrylovOracle::evolve(const StateVector& in, double t, StateVector& out) const {
  if (in.num_qubits() != spec_.num_qubits) throw DimensionError("Krylov oracle: size mismatch");
  const int k = spec_.num_qubits;
  const double beta0 = in.amplitudes().norm();
  out.reset(k);
  if (beta0 == 0.0 || t == 0.0) {
    out.amplitudes() = in.amplitudes();
    return;
  }
  const Index dim = in.size();
  const int max_m = static_cast<int>(std::min<Index>(max_dimension_, dim));
  MatrixXc q(dim, max_m);
  std::vector<double> alpha, beta;
  q.col(0) = in.amplitudes() / beta0;
  StateVector v(k), w(k);
  for (int m = 1; m <= max_m; ++m) {
    v.amplitudes() = q.col(m - 1);
    hamiltonian_apply(spec_, v, w);
    auto& wa = w.amplitudes();
    alpha.push_back(q.col(m - 1).dot(wa).real());
    for (int pass = 0; pass < 2; ++pass) {
      wa -= q.leftCols(m) * (q.leftCols(m).adjoint() * wa);
    }
    const double b = wa.norm();

    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) tri(i, i) = alpha[static_cast<std::size_t>(i)];
    for (int i = 0; i + 1 < m; ++i) {
      tri(i, i + 1) = tri(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tri);
    const Eigen::MatrixXd& z = eig.eigenvectors();
    VectorXc phases(m);
    for (int i = 0; i < m; ++i) {
      phases[i] = std::exp(Complex(0.0, -t * eig.eigenvalues()[i])) * z(0, i);
    }
    const VectorXc coeff = z.cast<Complex>() * phases;  // exp(-i T t) e_1
    const double estimate = b * std::abs(coeff[m - 1]);
    const bool exhausted = b <= 1e-14 * std::max(1.0, std::abs(alpha.back()));
    if (estimate < tolerance_ || exhausted) {
      out.amplitudes() = beta0 * (q.leftCols(m) * coeff);
      return;
    }
    if (m == max_m) break;
    beta.push_back(b);
    q.col(m) = wa / b;
  }
  throw KrylovNotConverged("Krylov oracle did not converge within the subspace limit");
}

std::unique_ptr<TargetUnitaryOracle> make_oracle(const HamiltonianSpec& spec, double t,
                                                 OracleMethod method) {
  if (method == OracleMethod::kKrylov) return std::make_unique<KrylovOracle>(spec, t);
  const MatrixXc h = dense_hamiltonian(spec);
  const MatrixXc u = (Complex(0.0, -t) * h).exp();
  return std::make_unique<DenseUnitaryOracle>(u);
}

std::string to_string(ModelKind kind) {
  return kind == ModelKind::kSpinless ? "spinless_fh" : "spinful_fh";
}

}  // namespace rqco

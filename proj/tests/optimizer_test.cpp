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


#include <limits>

#include <gtest/gtest.h>

#include "rqco/models.hpp"
#include "rqco/optimizer.hpp"
#include "rqco/random.hpp"

namespace rqco {
namespace {

ProductTangent random_vector(Rng& rng) {
  return {random_gaussian(4, 4, rng), random_gaussian(2, 2, rng)};
}

HessianOperator matrix_operator(const Eigen::MatrixXd& a) {
  return [a](const ProductTangent& x) { return from_real_vector(a * to_real_vector(x), x); };
}

Eigen::MatrixXd random_symmetric(int n, Rng& rng, double shift) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = normal(rng);
  }
  return 0.5 * (m + m.transpose()) + shift * Eigen::MatrixXd::Identity(n, n);
}

TEST(TruncatedCG, IdentityGivesNewtonStep) {
  Rng rng(1);
  const ProductTangent g = random_vector(rng);
  const TcgResult r = truncated_cg([](const ProductTangent& x) { return x; }, g, 1e6, {});
  ProductTangent diff = r.step;
  axpy(1.0, g, diff);
  EXPECT_LT(product_norm(diff), 1e-14);
  EXPECT_EQ(r.stop, TcgStop::kResidual);
  EXPECT_FALSE(r.on_boundary);
}

TEST(TruncatedCG, ZeroGradientGivesZeroStep) {
  Rng rng(2);
  const ProductTangent g = zeros_like(random_vector(rng));
  const TcgResult r = truncated_cg([](const ProductTangent& x) { return x; }, g, 1.0, {});
  EXPECT_EQ(product_norm(r.step), 0.0);
  EXPECT_EQ(r.stop, TcgStop::kZeroGradient);
}

TEST(TruncatedCG, NegativeCurvatureStepsToBoundary) {
  Rng rng(3);
  const ProductTangent g = random_vector(rng);
  const int n = static_cast<int>(to_real_vector(g).size());
  const Eigen::MatrixXd a = -Eigen::MatrixXd::Identity(n, n) - 0.1 * random_symmetric(n, rng, 0.0).cwiseAbs();
  const TcgResult r = truncated_cg(matrix_operator(a), g, 0.37, {});
  EXPECT_EQ(r.stop, TcgStop::kNegativeCurvature);
  EXPECT_NEAR(product_norm(r.step), 0.37, 1e-12);
}

TEST(TruncatedCG, NonFiniteOperatorThrows) {
  Rng rng(4);
  const ProductTangent g = random_vector(rng);
  const HessianOperator bad = [](const ProductTangent& x) {
    return scaled(std::numeric_limits<double>::quiet_NaN(), x);
  };
  EXPECT_THROW(truncated_cg(bad, g, 1.0, {}), Error);
}

TEST(TruncatedCG, NeverWorseThanCauchyPoint) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const ProductTangent g = random_vector(rng);
    const int n = static_cast<int>(to_real_vector(g).size());
    const Eigen::MatrixXd a = random_symmetric(n, rng, trial % 2 ? 8.0 : 2.0);
    const HessianOperator h = matrix_operator(a);
    const double radius = 0.05 + 0.1 * trial;
    const TcgResult r = truncated_cg(h, g, radius, {});
    EXPECT_LE(product_norm(r.step), radius * (1 + 1e-12));
    // Cauchy point: minimizer of the model along -g inside the region.
    const ProductTangent hg = h(g);
    const double gg = product_inner(g, g), ghg = product_inner(g, hg);
    double tau = radius / std::sqrt(gg);
    if (ghg > 0) tau = std::min(tau, gg / ghg);
    const ProductTangent cauchy = scaled(-tau, g);
    const double m_cauchy = model_change(g, cauchy, h(cauchy));
    EXPECT_LE(model_change(g, r.step, h(r.step)), m_cauchy + 1e-12 * std::abs(m_cauchy));
  }
}

TEST(TrustRegionParams, ValidationRejectsBadThresholds) {
  TrustRegionParams p;
  EXPECT_NO_THROW(p.validate());
  p.accept_threshold = 0.3;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.expand_factor = 0.5;
  EXPECT_THROW(p.validate(), Error);
}

TEST(TrustRegion, ExactOptimumStopsImmediately) {
  const HamiltonianSpec spec = build_spinless_fh(4, 0.0, 4.0, true);
  const Circuit c = build_trotter_circuit(spec, make_trotter_plan(2, 2, 1, 0.5));
  const auto u = make_oracle(spec, 0.5, OracleMethod::kDense);
  const OptimizationResult r = trust_region_optimize(c, *u, {}, {});
  EXPECT_EQ(r.trace.stop, StopReason::kGradientTolerance);
  EXPECT_LE(r.trace.records.size(), 2u);
}

struct SmallRun {
  Circuit circuit;
  std::unique_ptr<TargetUnitaryOracle> oracle;
};

SmallRun small_problem() {
  const HamiltonianSpec spec = build_spinless_fh(4, 1.0, 4.0, true);
  const double t = 0.4;
  return {build_trotter_circuit(spec, make_trotter_plan(2, 2, 1, t)),
          make_oracle(spec, t, OracleMethod::kDense)};
}

void check_invariants(const OptimizationResult& r, GateStructure structure) {
  // Rounding allowance of the regularized acceptance ratio plus one ulp of 2^k.
  const double scale = std::numeric_limits<double>::epsilon() * std::ldexp(1.0, r.circuit.num_qubits());
  double last = r.trace.records.front().f;
  double last_err = r.trace.records.front().error_frobenius;
  for (std::size_t i = 1; i < r.trace.records.size(); ++i) {
    const auto& row = r.trace.records[i];
    if (row.accepted) {
      EXPECT_LE(row.f, last + scale * (100.0 * last_err + 2.0));
      EXPECT_GT(row.rho, 0.0);
      last = row.f;
      last_err = row.error_frobenius;
    } else {
      EXPECT_EQ(row.f, last);
    }
  }
  const ProductPoint p = to_components(r.circuit.logical_gates(), structure);
  EXPECT_LT(max_unitarity_error(p), 1e-10);
}

TEST(TrustRegion, MonotoneAndUnitaryInBothModes) {
  for (auto structure : {GateStructure::kDense, GateStructure::kParity}) {
    SmallRun run = small_problem();
    TrustRegionParams params;
    params.max_iterations = 15;
    ObjectiveOptions opt;
    opt.structure = structure;
    const OptimizationResult r = trust_region_optimize(run.circuit, *run.oracle, params, opt);
    check_invariants(r, structure);
    EXPECT_LT(r.trace.records.back().error_frobenius, r.trace.records.front().error_frobenius);
    if (structure == GateStructure::kParity) {
      for (const auto& g : r.circuit.logical_gates()) EXPECT_TRUE(is_parity_sparse(g, 0.0));
    }
  }
}

TEST(TrustRegion, DedupDoesNotChangeIterates) {
  SmallRun run = small_problem();
  TrustRegionParams params;
  params.max_iterations = 8;
  ObjectiveOptions plain, dedup;
  plain.hessian_strategy = HessianStrategy::kPerSlot;
  dedup.translation_dedup = true;
  const OptimizationResult a = trust_region_optimize(run.circuit, *run.oracle, params, plain);
  const OptimizationResult b = trust_region_optimize(run.circuit, *run.oracle, params, dedup);
  ASSERT_EQ(a.trace.records.size(), b.trace.records.size());
  for (std::size_t i = 0; i < a.trace.records.size(); ++i) {
    EXPECT_NEAR(a.trace.records[i].f, b.trace.records[i].f, 1e-10);
    EXPECT_EQ(a.trace.records[i].accepted, b.trace.records[i].accepted);
  }
  for (int l = 0; l < a.circuit.num_logical(); ++l) {
    EXPECT_LT((a.circuit.logical_gates()[l] - b.circuit.logical_gates()[l]).norm(), 1e-10);
  }
}

TEST(TrustRegion, HessianVectorProductModeTracksAssembledMode) {
  SmallRun run = small_problem();
  TrustRegionParams params;
  params.max_iterations = 5;
  const OptimizationResult a = trust_region_optimize(run.circuit, *run.oracle, params, {});
  params.use_hvp = true;
  const OptimizationResult b = trust_region_optimize(run.circuit, *run.oracle, params, {});
  ASSERT_EQ(a.trace.records.size(), b.trace.records.size());
  for (std::size_t i = 0; i < a.trace.records.size(); ++i) {
    EXPECT_NEAR(a.trace.records[i].f, b.trace.records[i].f, 1e-9);
  }
}

}  // namespace
}  // namespace rqco

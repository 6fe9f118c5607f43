// Copyright 2026 The eoalab Authors
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

#include <gtest/gtest.h>

#include <cmath>

#include "eoalab/channels.hpp"
#include "eoalab/random.hpp"
#include "oracles.hpp"

using namespace eoalab;

namespace {

QuantumChannel random_qubit_channel(Rng& rng, Eigen::Index kraus = 3) {
  // Columns of a Haar isometry C^2 -> C^2 (x) C^k split into Kraus operators.
  const CMatrix u = haar_unitary(2 * kraus, rng).leftCols(2);
  std::vector<CMatrix> ks;
  for (Eigen::Index k = 0; k < kraus; ++k) {
    CMatrix m(2, 2);
    for (Eigen::Index b = 0; b < 2; ++b) m.row(b) = u.row(b * kraus + k);
    ks.push_back(m);
  }
  return QuantumChannel(ks);
}

CMatrix random_density(Eigen::Index d, Rng& rng) {
  const CMatrix g = gaussian_matrix(d, d, rng);
  const CMatrix r = g * g.adjoint();
  return r / r.trace().real();
}

}  // namespace

TEST(Channel, RejectsNonTracePreserving) {
  EXPECT_THROW(QuantumChannel({CMatrix::Identity(2, 2) * 0.9}), ValidationError);
  EXPECT_THROW(QuantumChannel({CMatrix::Identity(2, 2), CMatrix::Identity(3, 3)}), ValidationError);
  EXPECT_THROW(channels::depolarizing(1.5), ValidationError);
}

TEST(Channel, BuiltinsAreTracePreservingAndUnital) {
  EXPECT_TRUE(is_unital(channels::depolarizing(0.3)));
  EXPECT_TRUE(is_unital(channels::dephasing(1.0)));
  EXPECT_TRUE(is_unital(channels::aharonov_choi()));
  EXPECT_FALSE(is_unital(channels::amplitude_damping(0.4)));
}

TEST(Channel, DepolarizingOutput) {
  Rng rng(1);
  const CMatrix rho = random_density(2, rng);
  const CMatrix out = channels::depolarizing(0.4).apply(rho);
  const CMatrix want = 0.6 * rho + 0.4 * CMatrix::Identity(2, 2) / 2.0;
  EXPECT_LT((out - want).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Channel, ChoiRoundTrip) {
  Rng rng(4);
  for (int i = 0; i < 5; ++i) {
    const QuantumChannel t = random_qubit_channel(rng);
    const QuantumChannel back = channel_from_choi(choi(t).rho);
    const CMatrix rho = random_density(2, rng);
    EXPECT_LT((t.apply(rho) - back.apply(rho)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Channel, ChoiMatchesDirectConstruction) {
  const QuantumChannel t = channels::amplitude_damping(0.3);
  // (id (x) T)(|Phi><Phi|) built entry by entry.
  CMatrix want = CMatrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CMatrix eij = CMatrix::Zero(2, 2);
      eij(i, j) = 1.0;
      want.block(2 * i, 2 * j, 2, 2) = t.apply(eij) / 2.0;
    }
  }
  EXPECT_LT((choi(t).rho.matrix() - want).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Channel, ComplementaryEntropyEqualsOutputEntropyOnPureInputs) {
  Rng rng(6);
  const QuantumChannel t = random_qubit_channel(rng);
  const auto s = stinespring(t);
  EXPECT_LT((s.isometry.adjoint() * s.isometry - CMatrix::Identity(2, 2)).norm(), 1e-10);
  const CVector v = haar_vector(2, rng);
  const CMatrix rho = v * v.adjoint();
  EXPECT_NEAR(oracle::entropy(t.apply(rho)), oracle::entropy(complementary_output(s, rho)), 1e-9);
}

TEST(Channel, TensorPowerActsBlockwise) {
  const QuantumChannel t = channels::amplitude_damping(0.2);
  Rng rng(3);
  const CMatrix a = random_density(2, rng), b = random_density(2, rng);
  const CMatrix out = tensor_power(t, 2).apply(oracle::kron(a, b));
  EXPECT_LT((out - oracle::kron(t.apply(a), t.apply(b))).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Capacity, StandardValues) {
  EXPECT_NEAR(env_assisted_capacity(channels::identity(2)).capacity, 1.0, 1e-6);
  EXPECT_NEAR(env_assisted_capacity(channels::identity(3)).capacity, std::log2(3.0), 1e-6);
  EXPECT_NEAR(env_assisted_capacity(channels::depolarizing(1.0)).capacity, 1.0, 1e-6);
  EXPECT_NEAR(env_assisted_capacity(channels::dephasing(0.5)).capacity, 1.0, 1e-6);
}

TEST(Capacity, AmplitudeDampingMatchesGrid) {
  for (double g : {0.2, 0.5, 0.8}) {
    const auto r = env_assisted_capacity(channels::amplitude_damping(g));
    EXPECT_NEAR(r.capacity, oracle::amplitude_damping_capacity_grid(g), 1e-4) << g;
    EXPECT_GE(r.upper_value, r.capacity - 1e-12);
  }
}

TEST(Capacity, DominatesRandomInputs) {
  Rng rng(12);
  for (int i = 0; i < 10; ++i) {
    const QuantumChannel t = random_qubit_channel(rng);
    const auto r = env_assisted_capacity(t);
    for (int j = 0; j < 20; ++j) EXPECT_LE(capacity_objective(t, random_density(2, rng)), r.capacity + 1e-7);
  }
}

TEST(Fit, RecoversPlantedMixture) {
  Rng rng(21);
  const CMatrix u1 = haar_unitary(2, rng), u2 = haar_unitary(2, rng);
  const QuantumChannel t({std::sqrt(0.3) * u1, std::sqrt(0.7) * u2});
  const auto rep = fit_unitary_mixture(t, 1, 2, 3, 5);
  EXPECT_LT(rep.distance, 1e-3);
  ASSERT_EQ(rep.distance_by_k.size(), 2u);
  EXPECT_LE(rep.distance_by_k[1], rep.distance_by_k[0] + 1e-12);
  double w = 0.0;
  for (double x : rep.mixture.weights) w += x;
  EXPECT_NEAR(w, 1.0, 1e-12);
  // The reported distance is that of the returned mixture.
  const CMatrix j = choi(t).rho.matrix();
  EXPECT_NEAR(oracle::trace_norm(j - mixture_choi(rep.mixture)), rep.distance, 1e-9);
}

TEST(Fit, UnitaryChannelIsExact) {
  Rng rng(2);
  const auto rep = fit_unitary_mixture(channels::unitary(haar_unitary(3, rng)), 1, 1, 2, 1);
  EXPECT_LT(rep.distance, 1e-6);
}

TEST(Coding, OneUseEqualsUnassistedAverage) {
  const auto rep = env_assisted_coding_demo(channels::amplitude_damping(0.3), 1, 1);
  EXPECT_NEAR(rep.coherent_information, rep.unassisted_average, 1e-10);
}

TEST(Coding, FullDephasingHasClosedForm) {
  // Orthogonal product branches with q = 1/2: every code of a type with k
  // ones gives log2 N ebits, N = min(C(n,k), floor(2^{n (1 - 2 delta)})).
  for (std::size_t n = 1; n <= 5; ++n) {
    double want = 0.0;
    const double cap = std::floor(std::exp2(0.8 * static_cast<double>(n)));
    for (std::size_t k = 0; k <= n; ++k) {
      const double m = std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
      want += m / std::exp2(static_cast<double>(n)) * std::log2(std::max(1.0, std::min(m, cap)));
    }
    const auto rep = env_assisted_coding_demo(channels::dephasing(1.0), n, 3);
    EXPECT_NEAR(rep.coherent_information, want, 1e-6) << "n=" << n;
    EXPECT_TRUE(rep.exact);
  }
}

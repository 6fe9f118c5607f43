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

#pragma once

// Environment-assisted transmission at finite n. The channel is dilated to
// U: A -> B E, the test state phi^{A'A} is sent through n copies, and the
// environment runs the helper measurement of the distillation module on E^n
// (all codes of each type, outcome broadcast to the receiver as B'). Since
// each post-measurement state on A'^n B^n is pure, the coherent information
// I(A'> B^n B') equals the outcome-averaged entanglement sum_x p_x E(theta_x).

#include <cmath>
#include <cstdint>
#include <string>

#include "eoalab/channels/capacity.hpp"
#include "eoalab/channels/channel.hpp"
#include "eoalab/distill/protocols.hpp"

namespace eoalab {

enum class TestState { kMaxEntangled, kCapacityOptimal };

struct CodingDemoOptions {
  double delta = 0.1;
  TestState test_state = TestState::kCapacityOptimal;
  double max_enumerated_codes = 200;  // enumerate all codes of a type up to this many
  std::size_t code_samples = 64;      // otherwise average over this many random codes
  std::optional<CMatrix> environment_basis;
};

struct CodingDemoReport {
  std::size_t n = 0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::string test_state;
  double coherent_information = 0.0;  // bits, over n uses
  double rate = 0.0;                  // coherent_information / n
  double capacity = 0.0;              // C_A(T)
  double target = 0.0;                // n (C_A - delta)
  double test_state_value = 0.0;      // min{S(rho), S(T rho)} of the test input
  double unassisted_average = 0.0;    // n * sum_j q_j E(psi_j), no coding
  double code_rate = 0.0;
  std::size_t environment_dim = 0;
  bool exact = true;                  // false when some type used sampled codes
};

/// Pure state on A' B E: (id (x) U) phi with phi a purification of rho.
inline PureState dilated_test_state(const QuantumChannel& t, const CMatrix& rho) {
  const StinespringDilation s = stinespring(t);
  const DensityOperator r(rho, Layout({{"A", t.d_in()}}));
  const PureState p = reorder(purify(r, "A'"), {"A'", "A"});
  const auto da_ref = static_cast<Eigen::Index>(p.layout()[0].dim);
  const CMatrix phi = coefficient_matrix(p, {"A'"});
  const auto out = s.isometry.rows();
  CVector v(da_ref * out);
  for (Eigen::Index i = 0; i < da_ref; ++i) v.segment(i * out, out) = s.isometry * phi.row(i).transpose();
  return PureState::normalized(std::move(v), Layout({{"A'", static_cast<std::size_t>(da_ref)},
                                                     {"B", s.d_out},
                                                     {"E", s.d_env}}));
}

inline CodingDemoReport env_assisted_coding_demo(const QuantumChannel& t, std::size_t n,
                                                 std::uint64_t seed,
                                                 const CodingDemoOptions& opt = {}) {
  if (n < 1) throw ValidationError("n must be >= 1");
  CodingDemoReport rep;
  rep.n = n;
  rep.delta = opt.delta;
  rep.seed = seed;
  const CapacityResult cap = env_assisted_capacity(t);
  rep.capacity = cap.capacity;
  rep.target = static_cast<double>(n) * (cap.capacity - opt.delta);
  const auto d = static_cast<Eigen::Index>(t.d_in());
  CMatrix rho = CMatrix::Identity(d, d) / static_cast<double>(d);
  rep.test_state = "max-entangled";
  if (opt.test_state == TestState::kCapacityOptimal) {
    rho = cap.argmax;
    rep.test_state = "capacity-optimal";
  }
  rep.test_state_value = capacity_objective(t, rho);
  const PureState psi = dilated_test_state(t, rho);
  rep.environment_dim = psi.layout()[2].dim;
  const CMatrix basis = opt.environment_basis
                            ? *opt.environment_basis
                            : CMatrix(CMatrix::Identity(static_cast<Eigen::Index>(rep.environment_dim),
                                                        static_cast<Eigen::Index>(rep.environment_dim)));
  const auto src = distill::ProductSource::from_state(psi, {"A'"}, {"B"}, "E", basis);
  rep.code_rate = src.code_rate();
  rep.unassisted_average = static_cast<double>(n) * src.avg_entanglement;
  const double dim_n = std::pow(static_cast<double>(src.dim_a() * src.dim_b()), static_cast<double>(n));
  check_operator_size(dim_n, 1.0, memory_cap_bytes(), "n-copy branch");
  const auto table = distill::TypeTable::build(src.q, n);
  Rng rng(seed);
  double total = 0.0;
  for (std::size_t ti = 0; ti < table.types.size(); ++ti) {
    const double pt = table.probabilities[ti];
    if (pt <= 0.0) continue;
    const auto& type = table.types[ti];
    const double m = type.size();
    const std::size_t nw =
        distill::code_size_for_rate(n, src.code_rate() - 2.0 * opt.delta, m);
    double avg = 0.0;
    if (distill::binomial(m, static_cast<double>(nw)) <= opt.max_enumerated_codes) {
      const auto codes = distill::enumerate_type_codes(type, nw, opt.max_enumerated_codes);
      for (const auto& c : codes) avg += distill::code_outcome_average(src, c);
      avg /= static_cast<double>(codes.size());
    } else {
      rep.exact = false;
      for (std::size_t s = 0; s < opt.code_samples; ++s) {
        avg += distill::code_outcome_average(src, distill::sample_type_code(type, nw, rng));
      }
      avg /= static_cast<double>(opt.code_samples);
    }
    total += pt * avg;
  }
  rep.coherent_information = total;
  rep.rate = total / static_cast<double>(n);
  return rep;
}

}  // namespace eoalab

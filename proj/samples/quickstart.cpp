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

// Walks through the W state: bounds, rates, and a short distillation run.

#include <cstdio>

#include "eoalab/eoalab.hpp"

int main() {
  using namespace eoalab;
  const PureState w = make_w();

  const double bound = eoa_upper_bound(w, {"A"}, {"B"});
  const double eof = eof_2qubit(reduced_state(w, {"A", "B"}));
  std::printf("min{S(A),S(B)}      = %.5f\n", bound);
  std::printf("E_F(W^AB)           = %.5f\n", eof);

  // Helper C measuring in the +/- basis realizes the formation-optimal ensemble.
  const Ensemble e = ensemble_from_helper_basis(w, "C", fourier_basis(2));
  const GhzEprRates r = ghz_epr_rates(w, "C", e);
  std::printf("GHZ rate, EPR rate  = %.5f, %.5f\n", r.ghz, r.epr);

  const auto src = distill::ProductSource::from_state(w, {"A"}, {"B"}, "C");
  distill::ProtocolOptions opt;
  for (std::size_t n : {2, 4, 6}) {
    const auto rep = distill::run_eoa_protocol(src, n, 200, 7, opt);
    std::printf("n=%zu  mean E/n = %.4f +- %.4f  (bound %.4f, aborts %.2f)\n", n, rep.mean_rate,
                rep.std_error, rep.upper_bound, rep.abort_rate);
  }

  const CapacityResult cap = env_assisted_capacity(channels::amplitude_damping(0.5));
  std::printf("C_A(amplitude damping 0.5) = %.5f\n", cap.capacity);
  return 0;
}

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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Runtime limits are part of each check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eoalab/eoalab.hpp"
#include "../oracles.hpp"

using namespace eoalab;
using namespace eoalab::distill;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream note;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      note << " [failed: " << what << "]";
    }
  }
};

double h2(double p) { return oracle::h2(p); }

// Example 1 spectrum.
void ac1(Outcome& o) {
  const PureState phi = make_example1_phi();
  const auto s = schmidt(phi, {"A1", "A2"}).values;
  const std::vector<double> want = {0.25, 0.25, 0.125, 0.125, 0.125, 0.125};
  o.require(s.size() == want.size(), "six Schmidt values");
  for (std::size_t i = 0; i < std::min(s.size(), want.size()); ++i) {
    o.require(std::abs(s[i] - want[i]) <= 1e-9, "value " + std::to_string(i));
  }
  const double e = entanglement_entropy(phi, {"A1", "A2"});
  o.require(std::abs(e - 2.5) <= 1e-9, "entropy 2.5");
  o.note << " E=" << e;
}

// Example 1 single copy.
void ac2(Outcome& o) {
  EoAOptions opt;
  opt.restarts = 20;
  opt.seed = 1;
  const auto r = eoa_optimize(make_aharonov(), {"A"}, {"B"}, {"C"}, opt);
  o.require(r.lower_bound >= 0.999 && r.lower_bound <= 1.0 + 1e-9, "lower bound in [0.999, 1]");
  o.require(std::abs(r.upper_bound - std::log2(3.0)) <= 1e-9, "upper bound log2 3");
  o.note << " lb=" << r.lower_bound << " ub=" << r.upper_bound;
}

// Example 1 superadditivity.
void ac3(Outcome& o) {
  const DensityOperator alpha = reduced_state(make_aharonov(), {"A", "B"});
  const CMatrix target = oracle::kron(alpha.matrix(), alpha.matrix());  // A1 B1 A2 B2

  const Ensemble witness = make_example1_witness();
  const DensityOperator mix = reorder(witness.mixture(), {"A1", "B1", "A2", "B2"});
  const double dist = oracle::trace_norm(mix.matrix() - target);
  o.require(dist <= 1e-9, "witness averages to alpha (x) alpha");
  double min_e = 1e9;
  for (const auto& m : witness.entries()) {
    min_e = std::min(min_e, oracle::cut_entropy(m.state.amplitudes(), {3, 3, 3, 3}, 2));
  }
  const double avg = avg_entanglement(witness, {"A1", "A2"});
  o.require(avg >= 2.5 - 1e-6, "certified E_A >= 2.5");
  o.require(min_e >= 2.5 - 1e-6, "every member carries 2.5 ebits");

  // Haar average over (U1 (x) U2 (x) U1 (x) U2) phi.
  const CVector phi = make_example1_phi().amplitudes();
  std::mt19937_64 gen(20260501);
  const std::size_t samples = 100000;
  CMatrix acc = CMatrix::Zero(81, 81);
  for (std::size_t s = 0; s < samples; ++s) {
    const CMatrix u1 = oracle::haar(3, gen), u2 = oracle::haar(3, gen);
    const CMatrix u12 = oracle::kron(u1, u2);
    const CVector v = oracle::kron(u12, u12) * phi;
    acc.noalias() += v * v.adjoint();
  }
  acc /= static_cast<double>(samples);
  const Layout l({{"A1", 3}, {"A2", 3}, {"B1", 3}, {"B2", 3}});
  const CMatrix haar = reorder(DensityOperator::trusted(acc, l), {"A1", "B1", "A2", "B2"}).matrix();
  const double td = 0.5 * oracle::trace_norm(haar - target);
  o.require(td <= 0.05, "Haar average within trace distance 0.05");
  o.note << " witness_dist=" << dist << " E_avg=" << avg << " haar_td=" << td;
}

// Example 3, W state.
void ac4(Outcome& o) {
  const PureState w = make_w();
  const double ub = eoa_upper_bound(w, {"A"}, {"B"});
  const double eof = eof_2qubit(reduced_state(w, {"A", "B"}));
  const double ghz = oneway_bc_ghz_bound(w, {"A"}, {"B"}, {"C"}).value;
  const double combined = ub - 0.5 * eof;
  o.require(std::abs(ub - h2(1.0 / 3.0)) <= 1e-5 && std::abs(ub - 0.91830) <= 1e-5, "upper bound");
  o.require(std::abs(eof - 0.55005) <= 1e-4, "E_F");
  o.require(std::abs(ghz - 0.36825) <= 1e-3, "GHZ rate");
  o.require(std::abs(combined - 0.64327) <= 1e-3, "combined GHZ rate");
  o.note << " ub=" << ub << " eof=" << eof << " ghz=" << ghz << " combined=" << combined;
}

// Example 2, the Upsilon family.
void ac5(Outcome& o) {
  double worst = 0.0;
  for (int i = 0; i <= 10; ++i) {
    const double a2 = 0.05 * i;
    const double ab = std::sqrt(a2 * (1.0 - a2));
    const PureState u = make_upsilon(a2);
    const double eof = eof_2qubit(reduced_state(u, {"B", "C"}));
    const double bound = oneway_bc_ghz_bound(u, {"B"}, {"C"}, {"A"}).value;
    const auto rb = ghz_epr_rates(u, "B", ensemble_from_helper_basis(u, "B"));
    const double e1 = std::abs(eof - h2(0.5 - ab));
    const double e2 = std::abs(bound - (1.0 - h2(0.5 - ab)));
    o.require(e1 <= 1e-6, "E_F at a2=" + std::to_string(a2));
    o.require(e2 <= 1e-6, "helper-A bound at a2=" + std::to_string(a2));
    o.require(std::abs(rb.ghz - h2(a2)) <= 1e-9 && std::abs(rb.epr) <= 1e-9,
              "helper-B rates at a2=" + std::to_string(a2));
    worst = std::max({worst, e1, e2});
  }
  o.note << " max_err=" << worst;
}

// POVM completeness.
void ac6(Outcome& o) {
  const TypeClass t{4, {2, 2}};
  const std::size_t nw = 2;
  o.require(std::abs(t.size() - 6.0) < 1e-12, "M = 6");
  const double c = povm_constant(t, nw);
  o.require(std::abs(c - 0.4) <= 1e-12, "c = 2/5");
  CMatrix sum = CMatrix::Zero(16, 16);
  for (const auto& code : enumerate_type_codes(t, nw)) {
    for (std::size_t a = 0; a < nw; ++a) {
      const CVector v = fourier_state(code, a).amplitudes();
      sum += (c / static_cast<double>(nw)) * v * v.adjoint();
    }
  }
  const double e1 = (sum - type_projector(t)).cwiseAbs().maxCoeff();
  CMatrix all = CMatrix::Zero(16, 16);
  for (const auto& p : enumerate_types(4, 2)) all += type_projector(p);
  const double e2 = (all - CMatrix::Identity(16, 16)).cwiseAbs().maxCoeff();
  o.require(e1 <= 1e-10, "Fourier family sums to the type projector");
  o.require(e2 <= 1e-12, "type projectors sum to the identity");
  o.note << " c=" << c << " err_code=" << e1 << " err_types=" << e2;
}

// Expected E(theta)/n of the default protocol, summed exactly over types and
// codes (codes sampled when there are too many to list).
double exact_mean_rate(const ProductSource& src, std::size_t n) {
  const ProtocolOptions opt;
  const TypeTable table = TypeTable::build(src.q, n);
  Rng rng(1);
  double total = 0.0;
  for (std::size_t ti = 0; ti < table.types.size(); ++ti) {
    const TypeClass& t = table.types[ti];
    if (table.probabilities[ti] <= 0.0 || l1_distance(t.distribution(), src.q) > opt.eta) continue;
    const std::size_t nw = distill::detail::pick_code_size(src, n, t.size(), opt);
    double avg = 0.0;
    if (binomial(t.size(), static_cast<double>(nw)) <= 2000) {
      const auto codes = enumerate_type_codes(t, nw);
      for (const auto& c : codes) avg += code_outcome_average(src, c);
      avg /= static_cast<double>(codes.size());
    } else {
      for (int k = 0; k < 400; ++k) avg += code_outcome_average(src, sample_type_code(t, nw, rng));
      avg /= 400.0;
    }
    total += table.probabilities[ti] * avg;
  }
  return total / static_cast<double>(n);
}

// Distillation bound and trend.
void ac7(Outcome& o) {
  struct Case {
    const char* name;
    PureState psi;
  };
  const std::vector<Case> cases = {{"W", make_w()}, {"Upsilon(0.3)", make_upsilon(0.3)}, {"GHZ", make_ghz(3)}};
  for (const auto& c : cases) {
    const auto src = ProductSource::from_state(c.psi, {"A"}, {"B"}, "C");
    ProtocolOptions opt;
    opt.analytic_check = true;
    const auto r = run_eoa_protocol(src, 4, 500, 42, opt);
    o.require(r.analytic_checked && r.max_analytic_excess <= 1e-9,
              std::string(c.name) + " analytic bound");
    o.require(r.mean_rate <= r.upper_bound + 4.0 * r.std_error, std::string(c.name) + " empirical mean");
    std::vector<double> trend, exact;
    for (std::size_t n : {2, 4, 6}) {
      trend.push_back(run_eoa_protocol(src, n, 500, 42).mean_rate);
      exact.push_back(exact_mean_rate(src, n));
    }
    o.require(trend[0] <= trend[1] + 1e-12 && trend[1] <= trend[2] + 1e-12, std::string(c.name) + " trend");
    o.note << " " << c.name << ": mean=" << r.mean_rate << " se=" << r.std_error << " ub=" << r.upper_bound
           << " excess=" << r.max_analytic_excess << " trend=" << trend[0] << "," << trend[1] << ","
           << trend[2] << " expected=" << exact[0] << "," << exact[1] << "," << exact[2];
  }
}

// Coherent GHZ protocol.
void ac8(Outcome& o) {
  const auto ghz = ProductSource::from_state(make_ghz(3), {"A"}, {"B"}, "C");
  const auto rep = run_ghz_protocol(ghz, 2, 50, 42);
  o.require(rep.abort_rate < 1.0 && std::abs(rep.min_fidelity - 1.0) <= 1e-9, "GHZ input fidelity 1");
  const TypeClass t2{2, {1, 1}};
  const auto full = ghz_protocol_for_code(ghz, t2, Code::of_type(t2, t2.members()));
  o.require(std::abs(full.fidelity - 1.0) <= 1e-9, "GHZ input, full code");

  const auto w = ProductSource::from_state(make_w(), {"A"}, {"B"}, "C");
  std::vector<oracle::Mat> letters(w.branches.begin(), w.branches.end());
  auto check = [&](const TypeClass& t, const Code& code) {
    const GhzTrial tr = ghz_protocol_for_code(w, t, code);
    std::vector<oracle::Word> words;
    for (const auto& s : code.words()) words.emplace_back(s.begin(), s.end());
    const double ref = oracle::ghz_fidelity(letters, words, oracle::Word(tr.reference.begin(), tr.reference.end()));
    return std::abs(tr.fidelity - ref);
  };
  double worst = 0.0;
  // Trials of the protocol itself at n = 4.
  const auto wrep = run_ghz_protocol(w, 4, 20, 42);
  for (const auto& tr : wrep.per_trial) {
    if (tr.aborted) continue;
    TypeClass t{4, tr.type_counts};
    worst = std::max(worst, check(t, Code::of_type(t, tr.code)));
  }
  // Larger codes, where decoding is not perfect.
  Rng rng(42);
  for (const auto& counts : {std::vector<std::size_t>{3, 1}, std::vector<std::size_t>{2, 2}}) {
    const TypeClass t{4, counts};
    for (std::size_t nw : {2, 3}) worst = std::max(worst, check(t, sample_type_code(t, nw, rng)));
  }
  o.require(worst <= 1e-8, "W fidelity agrees with composed-operator oracle");
  o.note << " ghz_min_fid=" << rep.min_fidelity << " W_mean_fid=" << wrep.mean_fidelity
         << " max_oracle_diff=" << worst;
}

// Capacity.
void ac9(Outcome& o) {
  const double id2 = env_assisted_capacity(channels::identity(2)).capacity;
  const double id3 = env_assisted_capacity(channels::identity(3)).capacity;
  const double dep = env_assisted_capacity(channels::depolarizing(1.0)).capacity;
  const double ad = env_assisted_capacity(channels::amplitude_damping(0.5)).capacity;
  const double grid = oracle::amplitude_damping_capacity_grid(0.5);
  o.require(std::abs(id2 - 1.0) <= 1e-6, "identity qubit");
  o.require(std::abs(id3 - std::log2(3.0)) <= 1e-6, "identity qutrit");
  o.require(std::abs(dep - 1.0) <= 1e-6, "fully depolarizing");
  o.require(std::abs(ad - grid) <= 1e-3, "amplitude damping vs grid");

  Rng rng(9);
  std::size_t concave_fail = 0, dominance_fail = 0;
  for (int i = 0; i < 100; ++i) {
    const CMatrix iso = haar_unitary(6, rng).leftCols(2);
    std::vector<CMatrix> ks;
    for (Eigen::Index k = 0; k < 3; ++k) {
      CMatrix m(2, 2);
      for (Eigen::Index b = 0; b < 2; ++b) m.row(b) = iso.row(b * 3 + k);
      ks.push_back(m);
    }
    const QuantumChannel t(ks);
    auto rand_rho = [&]() {
      const CMatrix g = gaussian_matrix(2, 2, rng);
      const CMatrix r = g * g.adjoint();
      return CMatrix(r / r.trace().real());
    };
    const CMatrix r1 = rand_rho(), r2 = rand_rho();
    const double f1 = capacity_objective(t, r1), f2 = capacity_objective(t, r2);
    const double fm = capacity_objective(t, 0.5 * (r1 + r2));
    if (fm < 0.5 * (f1 + f2) - 1e-12) ++concave_fail;
    const double cap = env_assisted_capacity(t).capacity;
    if (cap < std::max(f1, f2) - 1e-9) ++dominance_fail;
  }
  o.require(concave_fail == 0, "concavity on random channels");
  o.require(dominance_fail == 0, "capacity dominates sampled inputs");
  o.note << " id2=" << id2 << " id3=" << id3 << " dep=" << dep << " ad=" << ad << " grid=" << grid;
}

// Four parties.
void ac10(Outcome& o) {
  const double g = mincut_entanglement(make_ghz(4), "A", "B").value;
  const CVector epr = make_epr().amplitudes();
  const PureState chain = tensor(PureState(epr, Layout({{"A", 2}, {"C1", 2}})),
                                 PureState(epr, Layout({{"C2", 2}, {"B", 2}})));
  const double ch = mincut_entanglement(chain, "A", "B").value;
  o.require(std::abs(g - 1.0) <= 1e-10, "GHZ4 min-cut");
  o.require(std::abs(ch) <= 1e-10, "EPR chain min-cut");

  Rng rng(5);
  const PureState psi = PureState::normalized(haar_vector(16, rng), Layout({{"A", 2}, {"B", 2}, {"C", 2}, {"D", 2}}));
  const auto rep = disengage_fourth(psi, "A", "B", "C", "D", 4, 100, 5);
  // The library may exchange a and b; the oracle follows the same choice.
  const PureState ordered = rep.swapped ? reorder(psi, {"B", "A", "C", "D"}) : psi;
  const double ref = oracle::four_party_marginal_distance(ordered.amplitudes(), {2, 2, 2, 2}, 4, rep.code_size,
                                                          400, 77);
  o.require(std::abs(rep.mean_marginal_distance - ref) <= 0.1, "marginal distance vs Monte-Carlo oracle");
  o.note << " ghz4=" << g << " chain=" << ch << " N=" << rep.code_size << " dist=" << rep.mean_marginal_distance
         << " oracle=" << ref;
}

// Mixture fitting.
void ac11(Outcome& o) {
  Rng rng(11);
  const CMatrix u1 = haar_unitary(2, rng), u2 = haar_unitary(2, rng);
  const QuantumChannel planted({std::sqrt(0.35) * u1, std::sqrt(0.65) * u2});
  const auto p = fit_unitary_mixture(planted, 1, 2, 10, 11);
  o.require(p.distance <= 1e-3, "planted mixture recovered");
  const auto a = fit_unitary_mixture(channels::aharonov_choi(), 1, 9, 2, 1);
  double lowest = 1e9;
  for (double d : a.distance_by_k) lowest = std::min(lowest, d);
  o.require(lowest >= 0.01, "Aharonov-Choi stays away from unitary mixtures");
  o.note << " planted=" << p.distance << " aharonov_choi_min=" << lowest;
}

}  // namespace

// Usage: acceptance [--expected-fail AC7[,AC8...]]
// Criteria named there still print FAIL but do not set the exit code; the
// reason for each belongs in the decisions ledger.
int main(int argc, char** argv) {
  std::vector<std::string> expected;
  for (int i = 1; i + 1 < argc; i += 2) {
    if (std::string(argv[i]) != "--expected-fail") {
      std::fprintf(stderr, "usage: acceptance [--expected-fail ID[,ID...]]\n");
      return 2;
    }
    std::stringstream ids(argv[i + 1]);
    for (std::string id; std::getline(ids, id, ',');) expected.push_back(id);
  }
  struct Criterion {
    const char* id;
    double limit_seconds;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> all = {
      {"AC1", 1, ac1},   {"AC2", 60, ac2},   {"AC3", 300, ac3},  {"AC4", 1, ac4},
      {"AC5", 1, ac5},   {"AC6", 1, ac6},    {"AC7", 300, ac7},  {"AC8", 120, ac8},
      {"AC9", 120, ac9}, {"AC10", 300, ac10}, {"AC11", 300, ac11},
  };
  int failures = 0;
  for (const auto& c : all) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs <= c.limit_seconds, "runtime limit " + std::to_string(c.limit_seconds) + " s");
    const bool known = std::find(expected.begin(), expected.end(), c.id) != expected.end();
    if (!o.pass && !known) ++failures;
    std::printf("%s %s (%.2f s)%s%s\n", c.id, o.pass ? "PASS" : "FAIL", secs,
                !o.pass && known ? " [expected failure]" : "", o.note.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

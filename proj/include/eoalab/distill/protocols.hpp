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

// Finite-n execution of the helper-assisted protocols:
//  * helper_measure / run_eoa_protocol: type projection followed by a rank-1
//    Fourier-code measurement on the helper's n copies (EPR distillation);
//  * run_ghz_protocol: the coherent variant (code-span projection, local
//    decoders, relabeling, controlled permutations) yielding GHZ + EPR;
//  * disengage_fourth: one helper of a four-party state measured with an
//    i.i.d. random code, leaving a tripartite state.
//
// Measuring with the full family {(c/N)|t_J(alpha)><t_J(alpha)|} over all
// codes J of the observed type is simulated exactly by drawing J uniformly
// and then alpha with probability |<t_J(alpha)|psi_P>|^2 M/N: the code
// marginal is uniform because tr(Theta_J rho_P) = N/M for every J. The
// alternative kCompleteWithComplement measures a fixed code projectively and
// treats the complement of span J as an abort.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eoalab/distill/pgm.hpp"
#include "eoalab/distill/source.hpp"
#include "eoalab/distill/types.hpp"
#include "eoalab/parallel.hpp"
#include "eoalab/random.hpp"

namespace eoalab::distill {

enum class CodeMeasurement {
  kUniformCode,             // exact emulation of the all-codes POVM
  kCompleteWithComplement,  // fixed code; complement of span J aborts
};

inline const char* to_string(CodeMeasurement m) {
  return m == CodeMeasurement::kUniformCode ? "uniform-code" : "complement-abort";
}

struct ProtocolOptions {
  double delta = 0.1;
  double eta = 0.2;                       // typicality window |P - q|_1 <= eta
  std::optional<std::size_t> code_size;   // overrides N when set (still capped at M)
  CodeMeasurement measurement = CodeMeasurement::kUniformCode;
  bool analytic_check = false;            // per-trial exact outcome average
  std::size_t threads = 1;
  std::size_t memory_cap = memory_cap_bytes();
};

/// Result of one run of the helper's two-step measurement.
struct OutcomeRecord {
  std::vector<std::size_t> type_counts;
  std::vector<Sequence> code;
  std::size_t alpha = 0;
  double type_probability = 0.0;
  double alpha_probability = 0.0;  // conditional on type and code
  double code_probability = 0.0;   // 1 / C(M, N) under uniform sampling
  std::size_t type_size = 0;       // M
  bool aborted = false;
  std::string abort_reason;
  std::optional<PureState> state;  // theta on a_1..a_n b_1..b_n
  double entanglement = 0.0;       // E(theta^{a^n | b^n}); 0 when aborted
  double predicted = 0.0;          // log2 N + n sum_j P(j) E(psi_j)
};

namespace detail {

/// Y_alpha = (1/sqrt N) sum_beta exp(-2 pi i alpha beta/N) X_beta; these are
/// the unnormalized projections <t_J(alpha)| onto the code branches.
inline std::vector<CMatrix> fourier_projections(const std::vector<CMatrix>& x) {
  const std::size_t n_words = x.size();
  std::vector<CMatrix> y(n_words, CMatrix::Zero(x.front().rows(), x.front().cols()));
  const double amp = 1.0 / std::sqrt(static_cast<double>(n_words));
  for (std::size_t alpha = 0; alpha < n_words; ++alpha) {
    for (std::size_t beta = 0; beta < n_words; ++beta) {
      y[alpha] += (amp * std::conj(fourier_phase(alpha, beta, n_words))) * x[beta];
    }
  }
  return y;
}

inline void check_sequence_memory(const ProductSource& src, std::size_t n, double copies,
                                  std::size_t cap) {
  const double rows = std::pow(static_cast<double>(src.dim_a()), static_cast<double>(n));
  const double cols = std::pow(static_cast<double>(src.dim_b()), static_cast<double>(n));
  check_operator_size(rows * copies, cols, cap, "n-copy branch matrices");
  check_operator_size(std::max(rows, cols), std::max(rows, cols), cap, "n-copy marginal");
}

inline std::size_t pick_code_size(const ProductSource& src, std::size_t n, double type_size,
                                  const ProtocolOptions& opt) {
  if (opt.code_size) {
    return std::clamp<std::size_t>(*opt.code_size, 1, static_cast<std::size_t>(type_size));
  }
  return code_size_for_rate(n, src.code_rate() - 2.0 * opt.delta, type_size);
}

inline std::size_t sample_index(const std::vector<double>& w, Rng& rng) {
  std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
  return pick(rng);
}

}  // namespace detail

/// Exact average entanglement of one type block under the uniform-code
/// measurement restricted to the code J: sum_alpha (|Y_alpha|^2/N) E(Y_alpha).
inline double code_outcome_average(const ProductSource& src, const Code& code) {
  std::vector<CMatrix> x;
  for (const auto& w : code.words()) x.push_back(src.sequence_matrix(w));
  const auto y = detail::fourier_projections(x);
  double total = 0.0;
  for (const auto& ya : y) {
    const double p = ya.squaredNorm() / static_cast<double>(code.size());
    if (p > 1e-15) total += p * coefficient_entropy(ya);
  }
  return total;
}

/// Two-step helper measurement on n copies of the source.
inline OutcomeRecord helper_measure(const ProductSource& src, std::size_t n, const TypeTable& table,
                                    const ProtocolOptions& opt, Rng& rng) {
  OutcomeRecord rec;
  const std::size_t ti = table.sample(rng);
  const TypeClass& type = table.types[ti];
  rec.type_counts = type.counts;
  rec.type_probability = table.probabilities[ti];
  const double m = type.size();
  rec.type_size = static_cast<std::size_t>(m);
  if (l1_distance(type.distribution(), src.q) > opt.eta) {
    rec.aborted = true;
    rec.abort_reason = "atypical type";
    return rec;
  }
  const std::size_t n_words = detail::pick_code_size(src, n, m, opt);
  detail::check_sequence_memory(src, n, 2.0 * static_cast<double>(n_words), opt.memory_cap);
  const Code code = sample_type_code(type, n_words, rng);
  rec.code = code.words();
  rec.code_probability = 1.0 / binomial(m, static_cast<double>(n_words));
  std::vector<CMatrix> x;
  x.reserve(n_words);
  for (const auto& w : code.words()) x.push_back(src.sequence_matrix(w));
  const auto y = detail::fourier_projections(x);
  std::vector<double> w(n_words + 1, 0.0);
  const double norm = opt.measurement == CodeMeasurement::kUniformCode
                          ? static_cast<double>(n_words)
                          : m;
  double inside = 0.0;
  for (std::size_t a = 0; a < n_words; ++a) {
    w[a] = y[a].squaredNorm() / norm;
    inside += w[a];
  }
  w[n_words] = std::max(0.0, 1.0 - inside);
  if (opt.measurement == CodeMeasurement::kUniformCode) w[n_words] = 0.0;
  const std::size_t pick = detail::sample_index(w, rng);
  double pe = 0.0;
  const auto dist = type.distribution();
  for (std::size_t j = 0; j < dist.size(); ++j) {
    pe += dist[j] * coefficient_entropy(src.branches[j]);
  }
  rec.predicted = std::log2(static_cast<double>(n_words)) + static_cast<double>(n) * pe;
  if (pick == n_words) {
    rec.aborted = true;
    rec.abort_reason = "outside code span";
    rec.alpha_probability = w[n_words];
    return rec;
  }
  rec.alpha = pick;
  rec.alpha_probability = w[pick];
  const CMatrix& th = y[pick];
  rec.entanglement = coefficient_entropy(th);
  CVector v(th.size());
  for (Eigen::Index i = 0; i < th.rows(); ++i) {
    for (Eigen::Index j = 0; j < th.cols(); ++j) v(i * th.cols() + j) = th(i, j);
  }
  rec.state = PureState::normalized(std::move(v), src.copies_layout(n));
  return rec;
}

inline OutcomeRecord helper_measure(const ProductSource& src, std::size_t n,
                                    const ProtocolOptions& opt, Rng& rng) {
  return helper_measure(src, n, TypeTable::build(src.q, n), opt, rng);
}

/// Exact sum over every outcome of a complete, physical helper measurement:
/// the type projection, then for each type a code J drawn with `rng`,
/// measured as {|t_J(alpha)>} plus the computational basis of the
/// complement of span J inside the type space.
struct AnalyticCheck {
  double average = 0.0;  // sum_outcomes p * E(theta)
  double bound = 0.0;    // n * min{S(a), S(b)}
  double total_probability = 0.0;
};

inline AnalyticCheck analytic_outcome_average(const ProductSource& src, std::size_t n,
                                              const TypeTable& table, const ProtocolOptions& opt,
                                              Rng& rng) {
  AnalyticCheck out;
  out.bound = static_cast<double>(n) * src.min_entropy();
  for (std::size_t ti = 0; ti < table.types.size(); ++ti) {
    const double pt = table.probabilities[ti];
    if (pt <= 0.0) continue;
    const TypeClass& type = table.types[ti];
    const double m = type.size();
    const std::size_t n_words = detail::pick_code_size(src, n, m, opt);
    const Code code = sample_type_code(type, n_words, rng);
    std::vector<CMatrix> x;
    for (const auto& w : code.words()) x.push_back(src.sequence_matrix(w));
    const auto y = detail::fourier_projections(x);
    double block = 0.0, block_p = 0.0;
    for (const auto& ya : y) {
      const double p = ya.squaredNorm() / m;
      block_p += p;
      if (p > 1e-15) block += p * coefficient_entropy(ya);
    }
    // Complement outcomes |J>, J not in the code: product states.
    const double rest = (m - static_cast<double>(n_words)) / m;
    const auto dist = type.distribution();
    double per_word = 0.0;
    for (std::size_t j = 0; j < dist.size(); ++j) {
      per_word += static_cast<double>(n) * dist[j] * coefficient_entropy(src.branches[j]);
    }
    block += rest * per_word;
    block_p += rest;
    out.average += pt * block;
    out.total_probability += pt * block_p;
  }
  return out;
}

// ---------------------------------------------------------------------------
// EPR distillation

struct EoaTrial {
  std::size_t trial = 0;
  std::vector<std::size_t> type_counts;
  std::size_t code_size = 0;
  std::size_t alpha = 0;
  double probability = 0.0;
  bool aborted = false;
  std::string abort_reason;
  double entanglement = 0.0;
  double rate = 0.0;
  double predicted_rate = 0.0;
  std::optional<AnalyticCheck> analytic;
};

struct DistillationReport {
  std::string protocol;
  std::size_t n = 0;
  double delta = 0.0;
  double eta = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::string measurement;
  double mean_rate = 0.0;
  double std = 0.0;        // sample standard deviation of the per-trial rate
  double std_error = 0.0;  // std / sqrt(trials)
  double upper_bound = 0.0;
  double abort_rate = 0.0;
  double chi = 0.0;
  double avg_entanglement = 0.0;
  double mean_predicted_rate = 0.0;  // over non-aborted trials
  double max_analytic_excess = 0.0;  // max over trials of (average - bound)
  bool analytic_checked = false;
  std::vector<EoaTrial> per_trial;
};

namespace detail {

inline void summarize(const std::vector<double>& rates, double& mean, double& sd, double& se) {
  const double count = static_cast<double>(rates.size());
  mean = 0.0;
  for (double r : rates) mean += r;
  mean /= count;
  double var = 0.0;
  for (double r : rates) var += (r - mean) * (r - mean);
  sd = rates.size() > 1 ? std::sqrt(var / (count - 1.0)) : 0.0;
  se = sd / std::sqrt(count);
}

}  // namespace detail

inline DistillationReport run_eoa_protocol(const ProductSource& src, std::size_t n,
                                           std::size_t trials, std::uint64_t seed,
                                           const ProtocolOptions& opt = {}) {
  if (n < 1) throw ValidationError("n must be >= 1");
  if (trials < 1) throw ValidationError("trials must be >= 1");
  detail::check_sequence_memory(src, n, 2.0, opt.memory_cap);
  const TypeTable table = TypeTable::build(src.q, n);
  std::vector<EoaTrial> per(trials);
  parallel_for(trials, opt.threads, [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    const OutcomeRecord rec = helper_measure(src, n, table, opt, rng);
    EoaTrial& tr = per[t];
    tr.trial = t;
    tr.type_counts = rec.type_counts;
    tr.code_size = rec.code.size();
    tr.alpha = rec.alpha;
    tr.probability = rec.type_probability * rec.alpha_probability;
    tr.aborted = rec.aborted;
    tr.abort_reason = rec.abort_reason;
    tr.entanglement = rec.entanglement;
    tr.rate = rec.entanglement / static_cast<double>(n);
    tr.predicted_rate = rec.predicted / static_cast<double>(n);
    if (opt.analytic_check) {
      Rng arng(derive_seed(seed ^ 0xa5a5a5a5a5a5a5a5ULL, t));
      tr.analytic = analytic_outcome_average(src, n, table, opt, arng);
    }
  });
  DistillationReport rep;
  rep.protocol = "eoa";
  rep.n = n;
  rep.delta = opt.delta;
  rep.eta = opt.eta;
  rep.trials = trials;
  rep.seed = seed;
  rep.measurement = to_string(opt.measurement);
  rep.upper_bound = src.min_entropy();
  rep.chi = src.code_rate();
  rep.avg_entanglement = src.avg_entanglement;
  std::vector<double> rates;
  double aborted = 0.0, pred = 0.0, pred_count = 0.0;
  rep.max_analytic_excess = -std::numeric_limits<double>::infinity();
  for (const auto& tr : per) {
    rates.push_back(tr.rate);
    if (tr.aborted) {
      aborted += 1.0;
    } else {
      pred += tr.predicted_rate;
      pred_count += 1.0;
    }
    if (tr.analytic) {
      rep.analytic_checked = true;
      rep.max_analytic_excess = std::max(rep.max_analytic_excess, tr.analytic->average - tr.analytic->bound);
    }
  }
  if (!rep.analytic_checked) rep.max_analytic_excess = 0.0;
  detail::summarize(rates, rep.mean_rate, rep.std, rep.std_error);
  rep.abort_rate = aborted / static_cast<double>(trials);
  rep.mean_predicted_rate = pred_count > 0 ? pred / pred_count : 0.0;
  rep.per_trial = std::move(per);
  return rep;
}

// ---------------------------------------------------------------------------
// Coherent GHZ + EPR protocol

/// Position map sigma with target[k] = word[sigma[k]]: moving factor sigma[k]
/// of psi_word to position k turns psi_word into psi_target.
inline std::vector<std::size_t> permutation_to(const Sequence& word, const Sequence& target) {
  std::vector<std::vector<std::size_t>> slots;
  for (std::size_t k = 0; k < word.size(); ++k) {
    if (word[k] >= slots.size()) slots.resize(word[k] + 1);
    slots[word[k]].push_back(k);
  }
  std::vector<std::size_t> next(slots.size(), 0);
  std::vector<std::size_t> sigma(target.size());
  for (std::size_t k = 0; k < target.size(); ++k) {
    const auto letter = target[k];
    if (letter >= slots.size() || next[letter] >= slots[letter].size()) {
      throw ValidationError("permutation_to: sequences are not of the same type");
    }
    sigma[k] = slots[letter][next[letter]++];
  }
  return sigma;
}

/// Row map for permuting n blocks of dimension d: out[t] = in[map[t]].
inline std::vector<Eigen::Index> block_permutation_map(std::size_t n, std::size_t d,
                                                       const std::vector<std::size_t>& sigma) {
  std::vector<Party> p;
  for (std::size_t k = 0; k < n; ++k) p.push_back({"k" + std::to_string(k), d});
  return eoalab::detail::permutation_map(Layout(std::move(p)), sigma);
}

/// (1/sqrt N) sum_b |b b b> on registers A', B', C'.
inline PureState ghz_register_state(std::size_t n_words) {
  const auto d = static_cast<Eigen::Index>(n_words);
  CVector v = CVector::Zero(d * d * d);
  for (Eigen::Index b = 0; b < d; ++b) v(b * d * d + b * d + b) = 1.0 / std::sqrt(static_cast<double>(n_words));
  return PureState(std::move(v), Layout({{"A'", n_words}, {"B'", n_words}, {"C'", n_words}}));
}

struct GhzTrial {
  std::size_t trial = 0;
  std::vector<std::size_t> type_counts;
  std::vector<Sequence> code;
  Sequence reference;             // lexicographically first member of the type
  std::size_t code_size = 0;
  bool aborted = false;
  std::string abort_reason;
  double fidelity = 0.0;          // with psi_ref (x) (1/sqrt N) sum_b |bbb>
  double ghz_bits = 0.0;          // log2 N
  double epr_bits = 0.0;          // E(psi_ref)
  double decoder_success_a = 0.0;
  double decoder_success_b = 0.0;
};

struct GhzReport {
  std::string protocol = "ghz";
  std::size_t n = 0;
  double delta = 0.0;
  double eta = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double mean_fidelity = 0.0;   // over non-aborted trials
  double min_fidelity = 0.0;
  double mean_ghz_rate = 0.0;   // log2 N / n, aborts count as 0
  double mean_epr_rate = 0.0;   // E(psi_ref) / n, aborts count as 0
  double std = 0.0;             // of the per-trial GHZ rate
  double abort_rate = 0.0;
  double chi = 0.0;             // predicted asymptotic GHZ rate
  double avg_entanglement = 0.0;  // predicted asymptotic EPR rate
  double upper_bound = 0.0;
  std::vector<GhzTrial> per_trial;
};

/// Runs the coherent protocol once for a given type and code and returns the
/// fidelity of the final state with the ideal output. Decoders are PGMs on
/// the n-copy marginals of the code branches.
inline GhzTrial ghz_protocol_for_code(const ProductSource& src, const TypeClass& type,
                                      const Code& code) {
  GhzTrial tr;
  tr.type_counts = type.counts;
  tr.code = code.words();
  tr.code_size = code.size();
  tr.reference = type.first();
  const std::size_t n = type.n;
  const std::size_t n_words = code.size();
  std::vector<CMatrix> x;
  std::vector<CMatrix> rho_a, rho_b;
  for (const auto& w : code.words()) {
    x.push_back(src.sequence_matrix(w));
    rho_a.push_back(x.back() * x.back().adjoint());
    rho_b.push_back((x.back().adjoint() * x.back()).transpose());
  }
  const Povm da = pgm(rho_a);
  const Povm db = pgm(rho_b);
  tr.decoder_success_a = da.success_probability;
  tr.decoder_success_b = db.success_probability;
  const CMatrix ref = src.sequence_matrix(tr.reference);
  cplx overlap = 0.0;
  for (std::size_t b = 0; b < n_words; ++b) {
    const CMatrix ra = psd_power(da.elements[b], 0.5);
    const CMatrix rb = psd_power(db.elements[b], 0.5);
    const CMatrix decoded = ra * x[b] * rb.transpose();
    const auto sigma = permutation_to(code[b], tr.reference);
    const auto map_a = block_permutation_map(n, static_cast<std::size_t>(src.dim_a()), sigma);
    const auto map_b = block_permutation_map(n, static_cast<std::size_t>(src.dim_b()), sigma);
    cplx acc = 0.0;
    for (Eigen::Index i = 0; i < ref.rows(); ++i) {
      for (Eigen::Index j = 0; j < ref.cols(); ++j) {
        acc += std::conj(ref(i, j)) *
               decoded(map_a[static_cast<std::size_t>(i)], map_b[static_cast<std::size_t>(j)]);
      }
    }
    overlap += acc;
  }
  overlap /= static_cast<double>(n_words);
  tr.fidelity = std::norm(overlap);
  tr.ghz_bits = std::log2(static_cast<double>(n_words));
  tr.epr_bits = coefficient_entropy(ref);
  return tr;
}

inline GhzReport run_ghz_protocol(const ProductSource& src, std::size_t n, std::size_t trials,
                                  std::uint64_t seed, const ProtocolOptions& opt = {}) {
  if (n < 1) throw ValidationError("n must be >= 1");
  if (trials < 1) throw ValidationError("trials must be >= 1");
  const TypeTable table = TypeTable::build(src.q, n);
  std::vector<GhzTrial> per(trials);
  parallel_for(trials, opt.threads, [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    const std::size_t ti = table.sample(rng);
    const TypeClass& type = table.types[ti];
    GhzTrial tr;
    if (l1_distance(type.distribution(), src.q) > opt.eta) {
      tr.type_counts = type.counts;
      tr.aborted = true;
      tr.abort_reason = "atypical type";
    } else {
      const double m = type.size();
      const std::size_t n_words = detail::pick_code_size(src, n, m, opt);
      detail::check_sequence_memory(src, n, 3.0 * static_cast<double>(n_words), opt.memory_cap);
      const Code code = sample_type_code(type, n_words, rng);
      tr = ghz_protocol_for_code(src, type, code);
    }
    tr.trial = t;
    per[t] = std::move(tr);
  });
  GhzReport rep;
  rep.n = n;
  rep.delta = opt.delta;
  rep.eta = opt.eta;
  rep.trials = trials;
  rep.seed = seed;
  rep.chi = src.code_rate();
  rep.avg_entanglement = src.avg_entanglement;
  rep.upper_bound = src.min_entropy();
  std::vector<double> ghz_rates;
  double fid = 0.0, ok = 0.0, epr = 0.0, aborted = 0.0;
  rep.min_fidelity = 1.0;
  for (const auto& tr : per) {
    const double g = tr.aborted ? 0.0 : tr.ghz_bits / static_cast<double>(n);
    ghz_rates.push_back(g);
    if (tr.aborted) {
      aborted += 1.0;
      continue;
    }
    fid += tr.fidelity;
    ok += 1.0;
    epr += tr.epr_bits / static_cast<double>(n);
    rep.min_fidelity = std::min(rep.min_fidelity, tr.fidelity);
  }
  double se = 0.0;
  detail::summarize(ghz_rates, rep.mean_ghz_rate, rep.std, se);
  rep.mean_fidelity = ok > 0 ? fid / ok : 0.0;
  if (ok == 0) rep.min_fidelity = 0.0;
  rep.mean_epr_rate = epr / static_cast<double>(trials);
  rep.abort_rate = aborted / static_cast<double>(trials);
  rep.per_trial = std::move(per);
  return rep;
}

// ---------------------------------------------------------------------------
// Four parties: disengaging one helper

struct FourPartyTrial {
  std::size_t trial = 0;
  std::vector<Sequence> code;
  std::size_t alpha = 0;
  double alpha_probability = 0.0;
  double marginal_distance = 0.0;      // |theta^a - (psi^a)^{(x)n}|_1
  double code_average_distance = 0.0;  // |(1/N) sum_b psi_{J_b}^a - (psi^a)^{(x)n}|_1
  double entanglement_a = 0.0;         // E(theta^{a|bc})
  double entanglement_b = 0.0;         // E(theta^{b|ac})
  double residual_rate = 0.0;          // min of the two, divided by n
};

struct FourPartyReport {
  std::string protocol = "four-party";
  std::size_t n = 0;
  double delta = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t code_size = 0;
  bool swapped = false;  // a and b exchanged so that chi_a <= chi_b
  double chi_a = 0.0, chi_b = 0.0, chi_ac = 0.0, chi_bc = 0.0, chi0 = 0.0;
  double mincut = 0.0;   // min{S(a), S(b), S(ac), S(bc)}
  double mean_marginal_distance = 0.0;
  double std_marginal_distance = 0.0;
  double mean_code_average_distance = 0.0;
  double mean_entanglement_a = 0.0;
  double mean_entanglement_b = 0.0;
  double mean_residual_rate = 0.0;
  std::vector<FourPartyTrial> per_trial;
  std::optional<PureState> last_state;  // theta of the final trial, a^n b^n c^n
};

struct FourPartyOptions {
  double delta = 0.1;
  std::optional<std::size_t> code_size;
  std::optional<CMatrix> helper_basis;  // columns; computational basis by default
  std::size_t threads = 1;
  std::size_t memory_cap = memory_cap_bytes();
  bool keep_last_state = false;
};

/// The helper d measures n copies with a rank-1 Fourier-code measurement
/// whose N codewords are drawn i.i.d. from q^{(x)n}. Reweighting the code
/// vectors by q_J^{-1/2} makes the code-averaged family a POVM whose code
/// marginal is exactly q^{(x)n}, with theta = (1/sqrt N) sum_b
/// exp(-2 pi i alpha b/N) psi_{J_b}.
inline FourPartyReport disengage_fourth(const PureState& psi, const std::string& a_label,
                                        const std::string& b_label, const std::string& c_label,
                                        const std::string& d_label, std::size_t n,
                                        std::size_t trials, std::uint64_t seed,
                                        const FourPartyOptions& opt = {}) {
  if (psi.layout().size() != 4) throw ValidationError("disengage_fourth needs a four-party state");
  if (n < 1 || trials < 1) throw ValidationError("n and trials must be >= 1");
  const PureState ordered = reorder(psi, {a_label, b_label, c_label, d_label});
  const auto dd = static_cast<Eigen::Index>(ordered.layout()[3].dim);
  const CMatrix basis = opt.helper_basis ? *opt.helper_basis : CMatrix(CMatrix::Identity(dd, dd));
  const Ensemble e = ensemble_from_helper_basis(ordered, d_label, basis);

  FourPartyReport rep;
  rep.n = n;
  rep.delta = opt.delta;
  rep.trials = trials;
  rep.seed = seed;
  rep.chi_a = holevo_chi(e, {a_label});
  rep.chi_b = holevo_chi(e, {b_label});
  rep.chi_ac = holevo_chi(e, {a_label, c_label});
  rep.chi_bc = holevo_chi(e, {b_label, c_label});
  std::string a = a_label, b = b_label;
  if (rep.chi_a > rep.chi_b) {
    std::swap(a, b);
    std::swap(rep.chi_a, rep.chi_b);
    std::swap(rep.chi_ac, rep.chi_bc);
    rep.swapped = true;
  }
  rep.chi0 = std::min(rep.chi_b, rep.chi_ac);
  rep.mincut = std::min({marginal_entropy(psi, {a}), marginal_entropy(psi, {b}),
                         marginal_entropy(psi, {a, c_label}), marginal_entropy(psi, {b, c_label})});

  // Branches reordered to (a, b, c) after a possible swap.
  std::vector<CVector> branch;
  std::vector<double> q;
  for (const auto& m : e.entries()) {
    branch.push_back(reorder(m.state, {a, b, c_label}).amplitudes());
    q.push_back(m.probability);
  }
  const Layout one = reorder(e[0].state, {a, b, c_label}).layout();
  const std::size_t da = one[0].dim, db = one[1].dim, dc = one[2].dim;
  const double dim_n = std::pow(static_cast<double>(da * db * dc), static_cast<double>(n));
  rep.code_size = opt.code_size ? std::max<std::size_t>(1, *opt.code_size)
                                : code_size_for_rate(n, rep.chi0 - opt.delta, 1e9);
  check_operator_size(dim_n, static_cast<double>(rep.code_size) + 2.0, opt.memory_cap,
                      "four-party code branches");

  // n-copy register: copy-major (a1 b1 c1 a2 ...) -> a^n b^n c^n.
  std::vector<Party> copy_major, sorted;
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t s = 0; s < 3; ++s) {
      copy_major.push_back({one[s].label + "_" + std::to_string(k + 1), one[s].dim});
    }
  }
  for (std::size_t s = 0; s < 3; ++s) {
    for (std::size_t k = 0; k < n; ++k) {
      order.push_back(3 * k + s);
      sorted.push_back(copy_major[3 * k + s]);
    }
  }
  const Layout copy_layout(copy_major);
  const Layout out_layout(sorted);
  const auto map = eoalab::detail::permutation_map(copy_layout, order);
  std::vector<std::string> a_labels, b_labels;
  for (std::size_t k = 0; k < n; ++k) {
    a_labels.push_back(sorted[k].label);
    b_labels.push_back(sorted[n + k].label);
  }

  // (psi^a)^{(x)n} and single-letter a-marginals.
  const DensityOperator psi_a = reduced_state(ordered, {a});
  CMatrix target_a = psi_a.matrix();
  for (std::size_t k = 1; k < n; ++k) target_a = kron(target_a, psi_a.matrix());
  std::vector<CMatrix> letter_a;
  for (const auto& v : branch) {
    const CMatrix m = Eigen::Map<const RowMajorCMatrix>(v.data(), static_cast<Eigen::Index>(da),
                                                       static_cast<Eigen::Index>(db * dc));
    letter_a.push_back(m * m.adjoint());
  }

  std::vector<FourPartyTrial> per(trials);
  std::vector<std::optional<PureState>> last(trials);
  parallel_for(trials, opt.threads, [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    FourPartyTrial tr;
    tr.trial = t;
    std::discrete_distribution<std::uint32_t> letter(q.begin(), q.end());
    for (std::size_t w = 0; w < rep.code_size; ++w) {
      Sequence s(n);
      for (auto& x : s) x = letter(rng);
      tr.code.push_back(std::move(s));
    }
    std::vector<CVector> words;
    CMatrix avg_a = CMatrix::Zero(target_a.rows(), target_a.cols());
    for (const auto& s : tr.code) {
      CVector v = branch[s[0]];
      CMatrix ra = letter_a[s[0]];
      for (std::size_t k = 1; k < n; ++k) {
        CVector nv(v.size() * branch[s[k]].size());
        for (Eigen::Index i = 0; i < v.size(); ++i) {
          nv.segment(i * branch[s[k]].size(), branch[s[k]].size()) = v(i) * branch[s[k]];
        }
        v = std::move(nv);
        ra = kron(ra, letter_a[s[k]]);
      }
      CVector out(v.size());
      for (std::size_t i = 0; i < map.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(map[i]);
      words.push_back(std::move(out));
      avg_a += ra;
    }
    avg_a /= static_cast<double>(tr.code.size());
    tr.code_average_distance = trace_norm_distance(avg_a, target_a);
    const std::size_t nw = words.size();
    std::vector<CVector> y(nw, CVector::Zero(words.front().size()));
    std::vector<double> w(nw);
    const double amp = 1.0 / std::sqrt(static_cast<double>(nw));
    for (std::size_t al = 0; al < nw; ++al) {
      for (std::size_t be = 0; be < nw; ++be) {
        y[al] += (amp * std::conj(fourier_phase(al, be, nw))) * words[be];
      }
      w[al] = y[al].squaredNorm() / static_cast<double>(nw);
    }
    tr.alpha = detail::sample_index(w, rng);
    tr.alpha_probability = w[tr.alpha];
    const PureState theta = PureState::normalized(y[tr.alpha], out_layout);
    const DensityOperator th_a = reduced_state(theta, a_labels);
    tr.marginal_distance = trace_norm_distance(th_a.matrix(), target_a);
    tr.entanglement_a = von_neumann_entropy(th_a);
    tr.entanglement_b = entanglement_entropy(theta, b_labels);
    tr.residual_rate = std::min(tr.entanglement_a, tr.entanglement_b) / static_cast<double>(n);
    per[t] = std::move(tr);
    if (opt.keep_last_state && t + 1 == trials) last[t] = theta;
  });
  std::vector<double> dist;
  double cad = 0.0, ea = 0.0, eb = 0.0, rr = 0.0;
  for (const auto& tr : per) {
    dist.push_back(tr.marginal_distance);
    cad += tr.code_average_distance;
    ea += tr.entanglement_a;
    eb += tr.entanglement_b;
    rr += tr.residual_rate;
  }
  double se = 0.0;
  detail::summarize(dist, rep.mean_marginal_distance, rep.std_marginal_distance, se);
  const double T = static_cast<double>(trials);
  rep.mean_code_average_distance = cad / T;
  rep.mean_entanglement_a = ea / T;
  rep.mean_entanglement_b = eb / T;
  rep.mean_residual_rate = rr / T;
  rep.per_trial = std::move(per);
  if (opt.keep_last_state) rep.last_state = last.back();
  return rep;
}

}  // namespace eoalab::distill

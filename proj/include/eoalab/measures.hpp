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

// Entanglement quantities and bounds: Holevo information, average ensemble
// entanglement, GHZ/EPR rate split, entanglement of assistance (bound and
// optimizer), Wootters concurrence, min-cut entropy, one-way broadcast bound.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eoalab/parallel.hpp"
#include "eoalab/qcore.hpp"
#include "eoalab/random.hpp"
#include "eoalab/states.hpp"

namespace eoalab {

using PartySet = std::vector<std::string>;

/// chi = S(sum_j q_j psi_j^M) - sum_j q_j S(psi_j^M) for the marginal M.
inline double holevo_chi(const Ensemble& e, const PartySet& marginal) {
  if (marginal.empty()) throw ValidationError("holevo_chi: empty marginal");
  (void)e.layout().indices_of(marginal);
  const bool whole = marginal.size() == e.layout().size();
  const DensityOperator avg = whole ? e.mixture() : partial_trace(e.mixture(), marginal);
  double member_entropy = 0.0;
  if (!whole) {
    for (const auto& m : e.entries()) {
      member_entropy += m.probability * entanglement_entropy(m.state, marginal);
    }
  }
  return von_neumann_entropy(avg) - member_entropy;
}

/// sum_j q_j E(psi_j) across `left | rest`.
inline double avg_entanglement(const Ensemble& e, const PartySet& left) {
  check_bipartition(e.layout(), left);
  double total = 0.0;
  for (const auto& m : e.entries()) total += m.probability * entanglement_entropy(m.state, left);
  return total;
}

/// Rate pair of the coherent (GHZ + EPR) protocol for a given helper ensemble.
struct GhzEprRates {
  double ghz = 0.0;               // chi = min{S(A),S(B)} - Ebar
  double epr = 0.0;               // Ebar
  double min_marginal_entropy = 0.0;
};

inline void check_ensemble_consistent(const PureState& psi, const PartySet& helper,
                                      const Ensemble& e, double tol = 1e-8) {
  const auto hi = psi.layout().indices_of(helper);
  const auto rest = psi.layout().select(psi.layout().complement(hi));
  if (!(e.layout() == rest)) {
    throw ValidationError("ensemble layout does not match the non-helper parties");
  }
  const DensityOperator target = reduced_state(psi, rest.labels());
  const double dist = trace_distance(target, e.mixture());
  if (dist > tol) {
    throw ValidationError("ensemble is inconsistent with the helper decomposition (distance " +
                          std::to_string(dist) + ")");
  }
}

inline GhzEprRates ghz_epr_rates(const PureState& psi, const PartySet& a, const PartySet& b,
                                 const PartySet& helper, const Ensemble& e) {
  check_ensemble_consistent(psi, helper, e);
  GhzEprRates r;
  r.min_marginal_entropy = std::min(marginal_entropy(psi, a), marginal_entropy(psi, b));
  r.epr = avg_entanglement(e, a);
  r.ghz = r.min_marginal_entropy - r.epr;
  return r;
}

/// Three-party convenience form: the two non-helper parties play A and B.
inline GhzEprRates ghz_epr_rates(const PureState& psi, const std::string& helper,
                                 const Ensemble& e) {
  const auto& l = psi.layout();
  if (l.size() != 3) throw ValidationError("ghz_epr_rates(psi, helper, e) needs three parties");
  const auto rest = l.complement({l.index_of(helper)});
  return ghz_epr_rates(psi, {l[rest[0]].label}, {l[rest[1]].label}, {helper}, e);
}

/// min{S(a), S(b)}: the asymptotic entanglement of assistance.
inline double eoa_upper_bound(const PureState& psi, const PartySet& a, const PartySet& b) {
  return std::min(marginal_entropy(psi, a), marginal_entropy(psi, b));
}

// ---------------------------------------------------------------------------
// Ensemble search over helper measurements

struct EoAOptions {
  std::size_t restarts = 20;
  std::size_t max_iter = 200;   // sweeps per restart
  double tol = 1e-7;            // stop when a sweep gains less than this
  std::size_t outputs_per_helper_dim = 2;  // k: measurement has k*d_C outcomes
  std::uint64_t seed = 1;
  std::size_t threads = 1;
};

struct OptimizerTrace {
  std::size_t restarts = 0;
  std::size_t best_restart = 0;
  std::size_t iterations = 0;   // sweeps used by the best restart
  std::size_t total_sweeps = 0;
  double final_gradient_norm = 0.0;
  bool converged = false;
  std::vector<double> restart_values;
};

struct EoAReport {
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  Ensemble witness;
  OptimizerTrace trace;
};

namespace detail {

/// Average entanglement sum_x |X_x|^2 E(X_x/|X_x|) over the outcomes of a
/// helper measurement "isometry C -> C (x) ancilla, then computational basis",
/// searched by sweeps of 2x2 rotations between outcome pairs. Each rotation
/// only touches two outcomes, so a trial costs two small eigenproblems.
class HelperMeasurementSearch {
 public:
  HelperMeasurementSearch(std::vector<CMatrix> conditionals, std::size_t outputs, double sign)
      : cond_(std::move(conditionals)), outputs_(outputs), sign_(sign) {}

  struct Result {
    double value = 0.0;
    std::vector<CMatrix> branches;
    std::size_t sweeps = 0;
    bool converged = false;
    double gradient_norm = 0.0;
  };

  Result run(Rng& rng, std::size_t max_iter, double tol) {
    const auto dc = static_cast<Eigen::Index>(cond_.size());
    const auto d = static_cast<Eigen::Index>(outputs_);
    const CMatrix u = haar_unitary(d, rng);
    iso_ = u.leftCols(dc);
    x_.assign(outputs_, CMatrix::Zero(cond_.front().rows(), cond_.front().cols()));
    h_.assign(outputs_, 0.0);
    for (Eigen::Index o = 0; o < d; ++o) {
      for (Eigen::Index c = 0; c < dc; ++c) x_[o] += iso_(o, c) * cond_[c];
      h_[o] = branch_value(x_[o]);
    }
    Result res;
    double current = total();
    for (std::size_t sweep = 1; sweep <= max_iter; ++sweep) {
      const double before = current;
      for (std::size_t p = 0; p < outputs_; ++p) {
        for (std::size_t q = p + 1; q < outputs_; ++q) optimize_pair(p, q);
      }
      current = total();
      res.sweeps = sweep;
      if (sign_ * (current - before) < tol) {
        res.converged = true;
        break;
      }
    }
    res.value = current;
    res.branches = x_;
    res.gradient_norm = gradient_norm();
    return res;
  }

  static double branch_value(const CMatrix& x) {
    const double w = x.squaredNorm();
    if (w < 1e-28) return 0.0;
    return w * coefficient_entropy(x);
  }

 private:
  double total() const {
    double s = 0.0;
    for (double v : h_) s += v;
    return s;
  }

  std::pair<CMatrix, CMatrix> rotated(std::size_t p, std::size_t q, double theta,
                                      double phi) const {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const cplx e = std::polar(1.0, phi);
    return {c * x_[p] - std::conj(e) * s * x_[q], e * s * x_[p] + c * x_[q]};
  }

  double pair_value(std::size_t p, std::size_t q, double theta, double phi) const {
    const auto [xp, xq] = rotated(p, q, theta, phi);
    return branch_value(xp) + branch_value(xq);
  }

  void optimize_pair(std::size_t p, std::size_t q) {
    const double pi = std::acos(-1.0);
    const double base = h_[p] + h_[q];
    double best = base;
    double bt = 0.0, bp = 0.0;
    for (int i = 1; i <= 8; ++i) {
      for (int j = 0; j < 8; ++j) {
        const double t = i * pi / 16.0;
        const double f = j * pi / 4.0;
        const double v = pair_value(p, q, t, f);
        if (sign_ * (v - best) > 0.0) {
          best = v;
          bt = t;
          bp = f;
        }
      }
    }
    double st = pi / 32.0, sp = pi / 8.0;
    for (int it = 0; it < 40 && st > 1e-9; ++it) {
      bool moved = false;
      const double cand[4][2] = {{bt + st, bp}, {bt - st, bp}, {bt, bp + sp}, {bt, bp - sp}};
      for (const auto& c : cand) {
        const double v = pair_value(p, q, c[0], c[1]);
        if (sign_ * (v - best) > 1e-15) {
          best = v;
          bt = c[0];
          bp = c[1];
          moved = true;
        }
      }
      if (!moved) {
        st *= 0.5;
        sp *= 0.5;
      }
    }
    if (sign_ * (best - base) <= 1e-15) return;
    auto [xp, xq] = rotated(p, q, bt, bp);
    x_[p] = std::move(xp);
    x_[q] = std::move(xq);
    h_[p] = branch_value(x_[p]);
    h_[q] = branch_value(x_[q]);
    const double c = std::cos(bt), s = std::sin(bt);
    const cplx e = std::polar(1.0, bp);
    const Eigen::RowVectorXcd vp = iso_.row(static_cast<Eigen::Index>(p));
    const Eigen::RowVectorXcd vq = iso_.row(static_cast<Eigen::Index>(q));
    iso_.row(static_cast<Eigen::Index>(p)) = c * vp - std::conj(e) * s * vq;
    iso_.row(static_cast<Eigen::Index>(q)) = e * s * vp + c * vq;
  }

  /// Norm of the derivatives of the objective along every pair rotation
  /// generator (two per pair), by central differences.
  double gradient_norm() const {
    const double pi = std::acos(-1.0);
    const double h = 1e-6;
    double acc = 0.0;
    for (std::size_t p = 0; p < outputs_; ++p) {
      for (std::size_t q = p + 1; q < outputs_; ++q) {
        for (double phi : {0.0, pi / 2.0}) {
          const double g = (pair_value(p, q, h, phi) - pair_value(p, q, -h, phi)) / (2.0 * h);
          acc += g * g;
        }
      }
    }
    return std::sqrt(acc);
  }

  std::vector<CMatrix> cond_;
  std::size_t outputs_;
  double sign_;
  CMatrix iso_;
  std::vector<CMatrix> x_;
  std::vector<double> h_;
};

/// Conditional coefficient matrices Psi_c (rows a, cols b) with
/// psi = sum_c Psi_c (x) |c>_helper.
inline std::vector<CMatrix> helper_conditionals(const PureState& psi, const PartySet& a,
                                                const PartySet& b, const PartySet& helper) {
  PartySet all = a;
  all.insert(all.end(), b.begin(), b.end());
  all.insert(all.end(), helper.begin(), helper.end());
  if (all.size() != psi.layout().size()) {
    throw ValidationError("a, b and helper must partition the parties");
  }
  const PureState ordered = reorder(psi, all);
  const auto& l = ordered.layout();
  const auto da = static_cast<Eigen::Index>(l.dim_of(l.indices_of(a)));
  const auto db = static_cast<Eigen::Index>(l.dim_of(l.indices_of(b)));
  const auto dc = static_cast<Eigen::Index>(helper.empty() ? 1 : l.dim_of(l.indices_of(helper)));
  std::vector<CMatrix> out(static_cast<std::size_t>(dc), CMatrix(da, db));
  const auto& v = ordered.amplitudes();
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < db; ++j) {
      for (Eigen::Index c = 0; c < dc; ++c) {
        out[static_cast<std::size_t>(c)](i, j) = v((i * db + j) * dc + c);
      }
    }
  }
  return out;
}

inline Ensemble ensemble_from_branches(const std::vector<CMatrix>& branches, const Layout& ab) {
  std::vector<std::pair<double, CVector>> kept;
  double total = 0.0;
  for (const auto& x : branches) {
    const double w = x.squaredNorm();
    if (w <= 1e-14) continue;
    CVector v(x.size());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      for (Eigen::Index j = 0; j < x.cols(); ++j) v(i * x.cols() + j) = x(i, j);
    }
    total += w;
    kept.emplace_back(w, std::move(v));
  }
  std::vector<EnsembleEntry> entries;
  for (auto& [w, v] : kept) entries.push_back({w / total, PureState::normalized(std::move(v), ab)});
  return Ensemble(std::move(entries));
}

struct SearchOutcome {
  double value;
  Ensemble witness;
  OptimizerTrace trace;
};

inline SearchOutcome search_ensembles(const PureState& psi, const PartySet& a, const PartySet& b,
                                      const PartySet& helper, const EoAOptions& opt,
                                      double sign) {
  if (opt.restarts == 0) throw ValidationError("optimizer needs at least one restart");
  if (opt.outputs_per_helper_dim == 0) throw ValidationError("outputs_per_helper_dim must be >= 1");
  auto cond = helper_conditionals(psi, a, b, helper);
  const std::size_t outputs = opt.outputs_per_helper_dim * cond.size();
  std::vector<HelperMeasurementSearch::Result> results(opt.restarts);
  parallel_for(opt.restarts, opt.threads, [&](std::size_t r) {
    Rng rng(derive_seed(opt.seed, r));
    HelperMeasurementSearch search(cond, outputs, sign);
    results[r] = search.run(rng, opt.max_iter, opt.tol);
  });
  std::size_t best = 0;
  OptimizerTrace trace;
  trace.restarts = opt.restarts;
  for (std::size_t r = 0; r < results.size(); ++r) {
    trace.restart_values.push_back(results[r].value);
    trace.total_sweeps += results[r].sweeps;
    if (sign * (results[r].value - results[best].value) > 0.0) best = r;
  }
  trace.best_restart = best;
  trace.iterations = results[best].sweeps;
  trace.converged = results[best].converged;
  trace.final_gradient_norm = results[best].gradient_norm;
  PartySet ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  const Layout ab_layout = psi.layout().select(psi.layout().indices_of(ab));
  return {results[best].value, ensemble_from_branches(results[best].branches, ab_layout), trace};
}

}  // namespace detail

/// Best single-copy ensemble entanglement sum_i p_i E(psi_i^{ab}) reachable by
/// measuring the helper, together with the min-marginal-entropy upper bound.
inline EoAReport eoa_optimize(const PureState& psi, const PartySet& a, const PartySet& b,
                              const PartySet& helper, const EoAOptions& opt = {}) {
  auto out = detail::search_ensembles(psi, a, b, helper, opt, +1.0);
  EoAReport rep{out.value, eoa_upper_bound(psi, a, b), std::move(out.witness), std::move(out.trace)};
  return rep;
}

// ---------------------------------------------------------------------------
// Two-qubit entanglement of formation

inline void check_two_qubit(const DensityOperator& rho) {
  const auto& l = rho.layout();
  if (l.size() != 2 || l[0].dim != 2 || l[1].dim != 2) {
    throw ValidationError("expected a two-qubit density operator");
  }
}

/// Wootters concurrence max{0, l1 - l2 - l3 - l4}. With rho = X X^dag
/// (X built from the eigenvectors above 1e-14), the l_i are the singular
/// values of X^T (sy x sy) X. Dropping null directions avoids the sqrt noise
/// of the rho^{1/2} route on rank-deficient states.
inline double concurrence(const DensityOperator& rho) {
  check_two_qubit(rho);
  CMatrix yy = CMatrix::Zero(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const HermitianEigen e = eig_hermitian(0.5 * (rho.matrix() + rho.matrix().adjoint()));
  std::vector<CVector> cols;
  for (std::size_t k = 0; k < e.values.size(); ++k) {
    if (e.values[k] > 1e-14) cols.push_back(std::sqrt(e.values[k]) * e.vectors.col(static_cast<Eigen::Index>(k)));
  }
  if (cols.empty()) return 0.0;
  CMatrix x(4, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) x.col(static_cast<Eigen::Index>(k)) = cols[k];
  const CMatrix tau = x.transpose() * yy * x;
  Eigen::JacobiSVD<CMatrix> svd(tau);
  const auto& sv = svd.singularValues();
  double c = sv(0);
  for (Eigen::Index k = 1; k < sv.size(); ++k) c -= sv(k);
  return std::clamp(c, 0.0, 1.0);
}

/// E_F(C) = H2((1 + sqrt(1 - C^2)) / 2).
inline double eof_from_concurrence(double c) {
  c = std::clamp(c, 0.0, 1.0);
  return binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - c * c)));
}

inline double eof_2qubit(const DensityOperator& rho) { return eof_from_concurrence(concurrence(rho)); }

// ---------------------------------------------------------------------------
// Min-cut entropy

struct MinCut {
  double value = 0.0;
  PartySet subset;  // helpers teamed with `a`
};

/// min over helper subsets S of S(a S), exhaustively. Subsets are visited by
/// size, then lexicographically by layout position; the first minimum wins.
inline MinCut mincut_entanglement(const PureState& psi, const std::string& a, const std::string& b) {
  const auto& l = psi.layout();
  if (l.size() < 2) throw ValidationError("mincut needs at least two parties");
  const auto ia = l.index_of(a);
  const auto ib = l.index_of(b);
  if (ia == ib) throw ValidationError("mincut: a and b must differ");
  const auto helpers = l.complement({ia, ib});
  if (helpers.size() > 30) throw ValidationError("mincut: too many helpers for exhaustive search");
  const std::uint64_t count = std::uint64_t{1} << helpers.size();
  std::vector<std::vector<std::size_t>> subsets;
  subsets.reserve(count);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t k = 0; k < helpers.size(); ++k) {
      if (mask & (std::uint64_t{1} << k)) s.push_back(k);
    }
    subsets.push_back(std::move(s));
  }
  std::stable_sort(subsets.begin(), subsets.end(), [](const auto& x, const auto& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    return x < y;
  });
  MinCut best{std::numeric_limits<double>::infinity(), {}};
  for (const auto& s : subsets) {
    PartySet side = {a};
    PartySet names;
    for (auto k : s) {
      side.push_back(l[helpers[k]].label);
      names.push_back(l[helpers[k]].label);
    }
    const double v = marginal_entropy(psi, side);
    if (v < best.value - 1e-12) best = {v, names};
  }
  best.value = std::max(best.value, 0.0);
  return best;
}

// ---------------------------------------------------------------------------
// One-way broadcast GHZ bound

enum class FormationProxy {
  kAuto,       // Wootters for 2x2, optimizer otherwise
  kWootters,   // closed form; two qubits only
  kOptimizer,  // best (smallest) ensemble found by the helper-measurement search
};

struct OneWayBound {
  double value = 0.0;
  double min_marginal_entropy = 0.0;
  double formation = 0.0;
  bool formation_is_upper_value = false;  // true when an optimizer supplied E_F
};

/// min{S(a), S(b)} - E_F(psi^{ab}), with E_F standing in for the entanglement
/// cost. When E_F comes from the optimizer it is an upper value, so the
/// reported bound is a lower value of the formula.
inline OneWayBound oneway_bc_ghz_bound(const PureState& psi, const PartySet& a, const PartySet& b,
                                       const PartySet& helper,
                                       FormationProxy proxy = FormationProxy::kAuto,
                                       const EoAOptions& opt = {}) {
  OneWayBound out;
  out.min_marginal_entropy = eoa_upper_bound(psi, a, b);
  const auto& l = psi.layout();
  const bool qubits = a.size() == 1 && b.size() == 1 && l[l.index_of(a[0])].dim == 2 &&
                      l[l.index_of(b[0])].dim == 2;
  if (proxy == FormationProxy::kWootters && !qubits) {
    throw ValidationError("Wootters formula needs two qubits; use the optimizer proxy");
  }
  if (proxy == FormationProxy::kWootters || (proxy == FormationProxy::kAuto && qubits)) {
    PartySet ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    out.formation = eof_2qubit(reduced_state(psi, ab));
  } else {
    if (opt.restarts == 0) {
      throw ValidationError("formation proxy unavailable: optimizer budget is zero");
    }
    out.formation = detail::search_ensembles(psi, a, b, helper, opt, -1.0).value;
    out.formation_is_upper_value = true;
  }
  out.value = out.min_marginal_entropy - out.formation;
  return out;
}

}  // namespace eoalab

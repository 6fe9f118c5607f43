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

#include <cmath>
#include <string>
#include <vector>

#include "eoalab/distill/types.hpp"
#include "eoalab/measures.hpp"
#include "eoalab/qcore.hpp"
#include "eoalab/states.hpp"

namespace eoalab::distill {

/// psi^{abc} written as sum_j sqrt(q_j) |psi_j>^{ab} |j>^c for a chosen helper
/// basis, kept as the per-letter data needed to build n-copy sequence states
/// without ever forming psi^{(x) n}. Letters with zero weight are dropped.
struct ProductSource {
  Layout a_layout;                // one copy of the a side
  Layout b_layout;                // one copy of the b side
  std::vector<double> q;          // letter probabilities
  std::vector<CMatrix> branches;  // unit-norm coefficient matrices, rows a, cols b
  double entropy_a = 0.0;         // S(a) of psi
  double entropy_b = 0.0;
  double chi_a = 0.0;             // Holevo information of {q_j, psi_j^a}
  double chi_b = 0.0;
  double avg_entanglement = 0.0;  // sum_j q_j E(psi_j)

  static ProductSource from_state(const PureState& psi, const PartySet& a, const PartySet& b,
                                  const std::string& helper, const CMatrix& basis) {
    PartySet order = a;
    order.insert(order.end(), b.begin(), b.end());
    order.push_back(helper);
    if (order.size() != psi.layout().size()) {
      throw ValidationError("a, b and the helper must cover every party");
    }
    const PureState ordered = reorder(psi, order);
    const Ensemble e = ensemble_from_helper_basis(ordered, helper, basis);
    ProductSource s;
    const auto& l = ordered.layout();
    s.a_layout = l.select(l.indices_of(a));
    s.b_layout = l.select(l.indices_of(b));
    const auto da = static_cast<Eigen::Index>(s.a_layout.total_dim());
    const auto db = static_cast<Eigen::Index>(s.b_layout.total_dim());
    for (const auto& m : e.entries()) {
      s.q.push_back(m.probability);
      s.branches.push_back(Eigen::Map<const RowMajorCMatrix>(m.state.amplitudes().data(), da, db));
    }
    s.entropy_a = marginal_entropy(psi, a);
    s.entropy_b = marginal_entropy(psi, b);
    s.avg_entanglement = eoalab::avg_entanglement(e, a);
    s.chi_a = s.entropy_a - s.avg_entanglement;
    s.chi_b = s.entropy_b - s.avg_entanglement;
    return s;
  }

  static ProductSource from_state(const PureState& psi, const PartySet& a, const PartySet& b,
                                  const std::string& helper) {
    const auto dc = static_cast<Eigen::Index>(psi.layout()[psi.layout().index_of(helper)].dim);
    return from_state(psi, a, b, helper, CMatrix::Identity(dc, dc));
  }

  std::size_t alphabet() const { return q.size(); }
  Eigen::Index dim_a() const { return static_cast<Eigen::Index>(a_layout.total_dim()); }
  Eigen::Index dim_b() const { return static_cast<Eigen::Index>(b_layout.total_dim()); }

  /// min{S(a), S(b)}.
  double min_entropy() const { return std::min(entropy_a, entropy_b); }
  /// Holevo rate of the weaker side; sets the code size.
  double code_rate() const { return std::min(chi_a, chi_b); }

  /// psi_J = psi_{j1} (x) ... (x) psi_{jn} as a (d_a^n x d_b^n) matrix.
  CMatrix sequence_matrix(const Sequence& s) const {
    CMatrix out = branches.at(s.front());
    for (std::size_t k = 1; k < s.size(); ++k) out = kron(out, branches.at(s[k]));
    return out;
  }

  /// sum_k E(psi_{j_k}).
  double sequence_entanglement(const Sequence& s) const {
    double e = 0.0;
    for (auto x : s) e += coefficient_entropy(branches.at(x));
    return e;
  }

  /// Labels of the n-copy register: a-side parties copy by copy, then the
  /// b side, e.g. A_1 A_2 ... B_1 B_2 ...
  Layout copies_layout(std::size_t n) const {
    std::vector<Party> p;
    for (const Layout* side : {&a_layout, &b_layout}) {
      for (std::size_t k = 1; k <= n; ++k) {
        for (const auto& party : side->parties()) {
          p.push_back({party.label + "_" + std::to_string(k), party.dim});
        }
      }
    }
    return Layout(std::move(p));
  }

  std::vector<std::string> a_copy_labels(std::size_t n) const {
    std::vector<std::string> out;
    for (std::size_t k = 1; k <= n; ++k) {
      for (const auto& party : a_layout.parties()) out.push_back(party.label + "_" + std::to_string(k));
    }
    return out;
  }
};

/// Type classes with their Born probabilities M * prod_j q_j^{n_j}.
struct TypeTable {
  std::vector<TypeClass> types;
  std::vector<double> probabilities;

  static TypeTable build(const std::vector<double>& q, std::size_t n,
                         double cap = kDefaultSequenceCap) {
    TypeTable t;
    t.types = enumerate_types(n, q.size(), cap);
    for (const auto& tc : t.types) {
      double lp = std::log(tc.size());
      bool zero = false;
      for (std::size_t j = 0; j < q.size(); ++j) {
        if (tc.counts[j] == 0) continue;
        if (q[j] <= 0.0) {
          zero = true;
          break;
        }
        lp += static_cast<double>(tc.counts[j]) * std::log(q[j]);
      }
      t.probabilities.push_back(zero ? 0.0 : std::exp(lp));
    }
    return t;
  }

  std::size_t sample(Rng& rng) const {
    std::discrete_distribution<std::size_t> pick(probabilities.begin(), probabilities.end());
    return pick(rng);
  }
};

/// |P - q|_1.
inline double l1_distance(const std::vector<double>& p, const std::vector<double>& q) {
  double d = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) d += std::abs(p[j] - q[j]);
  return d;
}

}  // namespace eoalab::distill

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

// Canonical states, purification, and ensemble extraction.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "eoalab/qcore.hpp"

namespace eoalab {

struct EnsembleEntry {
  double probability;
  PureState state;
};

/// Probability-weighted pure states on a common layout.
class Ensemble {
 public:
  explicit Ensemble(std::vector<EnsembleEntry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw ValidationError("ensemble must have at least one member");
    double total = 0.0;
    for (const auto& e : entries_) {
      if (!(e.probability > 0.0)) throw ValidationError("ensemble probabilities must be > 0");
      if (!(e.state.layout() == entries_.front().state.layout())) {
        throw ValidationError("ensemble members must share one layout");
      }
      total += e.probability;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw ValidationError("ensemble probabilities sum to " + std::to_string(total));
    }
  }

  const std::vector<EnsembleEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const EnsembleEntry& operator[](std::size_t i) const { return entries_[i]; }
  const Layout& layout() const { return entries_.front().state.layout(); }

  std::vector<double> probabilities() const {
    std::vector<double> q;
    q.reserve(entries_.size());
    for (const auto& e : entries_) q.push_back(e.probability);
    return q;
  }

  /// sum_j q_j |psi_j><psi_j|
  DensityOperator mixture() const {
    const auto d = static_cast<Eigen::Index>(layout().total_dim());
    CMatrix rho = CMatrix::Zero(d, d);
    for (const auto& e : entries_) {
      rho.noalias() += e.probability * e.state.amplitudes() * e.state.amplitudes().adjoint();
    }
    return DensityOperator::trusted(std::move(rho), layout());
  }

 private:
  std::vector<EnsembleEntry> entries_;
};

namespace detail {

inline std::string default_label(std::size_t i) {
  if (i < 26) return std::string(1, static_cast<char>('A' + i));
  return "P" + std::to_string(i);
}

inline Layout uniform_layout(std::size_t parties, std::size_t dim) {
  std::vector<Party> p;
  for (std::size_t i = 0; i < parties; ++i) p.push_back({default_label(i), dim});
  return Layout(std::move(p));
}

}  // namespace detail

/// (1/sqrt d) sum_i |ii> on parties A, B.
inline PureState make_epr(std::size_t d = 2) {
  if (d < 2) throw ValidationError("make_epr needs d >= 2");
  const auto dd = static_cast<Eigen::Index>(d);
  CVector v = CVector::Zero(dd * dd);
  for (Eigen::Index i = 0; i < dd; ++i) v(i * dd + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return PureState(std::move(v), detail::uniform_layout(2, d));
}

/// (1/sqrt d) sum_i |i...i> on m parties labeled A, B, C, ...
inline PureState make_ghz(std::size_t m = 3, std::size_t d = 2) {
  if (m < 2) throw ValidationError("make_ghz needs m >= 2");
  if (d < 2) throw ValidationError("make_ghz needs d >= 2");
  const Layout layout = detail::uniform_layout(m, d);
  const auto total = static_cast<Eigen::Index>(layout.total_dim());
  Eigen::Index step = 0;
  for (std::size_t k = 0, s = 1; k < m; ++k, s *= d) step += static_cast<Eigen::Index>(s);
  CVector v = CVector::Zero(total);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(d); ++i) {
    v(i * step) = 1.0 / std::sqrt(static_cast<double>(d));
  }
  return PureState(std::move(v), layout);
}

/// (|001> + |010> + |100>)/sqrt 3 on A, B, C.
inline PureState make_w() {
  CVector v = CVector::Zero(8);
  v(1) = v(2) = v(4) = 1.0 / std::sqrt(3.0);
  return PureState(std::move(v), detail::uniform_layout(3, 2));
}

/// Totally antisymmetric 3-qutrit state: amplitude sign(pi)/sqrt 6 on
/// |pi(0) pi(1) pi(2)>.
inline PureState make_aharonov() {
  CVector v = CVector::Zero(27);
  const double a = 1.0 / std::sqrt(6.0);
  auto idx = [](int i, int j, int k) { return 9 * i + 3 * j + k; };
  v(idx(0, 1, 2)) = a;
  v(idx(1, 2, 0)) = a;
  v(idx(2, 0, 1)) = a;
  v(idx(2, 1, 0)) = -a;
  v(idx(1, 0, 2)) = -a;
  v(idx(0, 2, 1)) = -a;
  return PureState(std::move(v), detail::uniform_layout(3, 3));
}

/// alpha |0>_A |Phi+>_BC + beta |1>_A |Phi->_BC with alpha^2 = alpha2 <= 1/2.
inline PureState make_upsilon(double alpha2) {
  if (!(alpha2 >= 0.0 && alpha2 <= 0.5)) {
    throw ValidationError("make_upsilon: alpha^2 must lie in [0, 1/2]");
  }
  const double alpha = std::sqrt(alpha2);
  const double beta = std::sqrt(1.0 - alpha2);
  const double r = 1.0 / std::sqrt(2.0);
  CVector v = CVector::Zero(8);
  v(0) = alpha * r;   // |0>|00>
  v(3) = alpha * r;   // |0>|11>
  v(4) = beta * r;    // |1>|00>
  v(7) = -beta * r;   // |1>|11>
  return PureState::normalized(std::move(v), detail::uniform_layout(3, 2));
}

/// The four-qutrit state on A1 A2 B1 B2
///   [(|01>-|10>)_{A1B1} (|01>-|10>)_{A2B2} + (|12>-|21>)_{A1B1} (|12>-|21>)_{A2B2}] / sqrt 8
/// whose local-unitary orbit averages to two copies of the Aharonov marginal.
inline PureState make_example1_phi() {
  const Layout layout({{"A1", 3}, {"A2", 3}, {"B1", 3}, {"B2", 3}});
  CVector v = CVector::Zero(81);
  auto idx = [](int a1, int a2, int b1, int b2) { return 27 * a1 + 9 * a2 + 3 * b1 + b2; };
  // Each antisymmetric pair (x,y): |xy> - |yx> on (A_k, B_k).
  const std::pair<int, int> pairs[2] = {{0, 1}, {1, 2}};
  for (const auto& [x, y] : pairs) {
    const int a[2] = {x, y};
    const int b[2] = {y, x};
    const double s[2] = {1.0, -1.0};
    for (int u = 0; u < 2; ++u) {
      for (int w = 0; w < 2; ++w) {
        v(idx(a[u], a[w], b[u], b[w])) += s[u] * s[w] / std::sqrt(8.0);
      }
    }
  }
  return PureState(std::move(v), layout);
}

/// Weyl operator X^a Z^b on C^d: |k> -> exp(2 pi i b k / d) |k + a mod d>.
inline CMatrix weyl_operator(std::size_t d, std::size_t a, std::size_t b) {
  const auto n = static_cast<Eigen::Index>(d);
  CMatrix w = CMatrix::Zero(n, n);
  const double pi = std::acos(-1.0);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto row = static_cast<Eigen::Index>((static_cast<std::size_t>(k) + a) % d);
    w(row, k) = std::polar(1.0, 2.0 * pi * static_cast<double>(b * static_cast<std::size_t>(k)) /
                                    static_cast<double>(d));
  }
  return w;
}

/// Uniform 81-member ensemble (U1 (x) U2 (x) U1 (x) U2) phi over qutrit Weyl
/// operators U1, U2. Its average is exactly two copies of the Aharonov
/// two-party marginal, and every member carries 2.5 ebits across A1A2|B1B2.
inline Ensemble make_example1_witness() {
  const PureState phi = make_example1_phi();
  std::vector<EnsembleEntry> entries;
  for (std::size_t g1 = 0; g1 < 9; ++g1) {
    for (std::size_t g2 = 0; g2 < 9; ++g2) {
      const CMatrix u1 = weyl_operator(3, g1 / 3, g1 % 3);
      const CMatrix u2 = weyl_operator(3, g2 / 3, g2 % 3);
      const CMatrix u = kron(kron(u1, u2), kron(u1, u2));
      entries.push_back({1.0 / 81.0, PureState::normalized(u * phi.amplitudes(), phi.layout())});
    }
  }
  return Ensemble(std::move(entries));
}

/// Eigenbasis purification: sum_k sqrt(lambda_k) |v_k> |k>_helper over the
/// eigenvalues above 1e-12, in descending order. The helper dimension is the
/// numerical rank of rho.
inline PureState purify(const DensityOperator& rho, const std::string& helper_label) {
  if (rho.layout().contains(helper_label)) {
    throw ValidationError("helper label '" + helper_label + "' already in layout");
  }
  const HermitianEigen eig = eig_hermitian(rho.matrix());
  std::size_t rank = 0;
  while (rank < eig.values.size() && eig.values[rank] > 1e-12) ++rank;
  if (rank == 0) throw ValidationError("purify: zero operator");
  const auto d = static_cast<Eigen::Index>(rho.dim());
  const auto r = static_cast<Eigen::Index>(rank);
  CVector v = CVector::Zero(d * r);
  for (Eigen::Index k = 0; k < r; ++k) {
    const double w = std::sqrt(eig.values[static_cast<std::size_t>(k)]);
    for (Eigen::Index i = 0; i < d; ++i) v(i * r + k) = w * eig.vectors(i, k);
  }
  return PureState::normalized(std::move(v),
                               rho.layout().concat(Layout({{helper_label, rank}})));
}

inline void check_unitary(const CMatrix& u, double tol = 1e-10) {
  if (u.rows() != u.cols()) throw ValidationError("basis matrix must be square");
  const double err =
      (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  if (err > tol) throw ValidationError("basis matrix is not unitary (error " + std::to_string(err) + ")");
}

/// Pure-state ensemble induced on the non-helper parties when the helper is
/// measured in the orthonormal basis given by the columns of `basis`.
/// Branches with probability <= 1e-14 are dropped.
inline Ensemble ensemble_from_helper_basis(const PureState& psi, const std::string& helper,
                                           const CMatrix& basis) {
  const auto h = psi.layout().index_of(helper);
  if (psi.layout().size() < 2) throw ValidationError("need at least one non-helper party");
  const auto dc = static_cast<Eigen::Index>(psi.layout()[h].dim);
  if (basis.rows() != dc) throw ValidationError("basis dimension does not match helper");
  check_unitary(basis);
  const auto rest = psi.layout().complement({h});
  const Layout rest_layout = psi.layout().select(rest);
  // columns: helper index, rows: rest
  const CMatrix x = coefficient_matrix(psi, rest_layout.labels());
  std::vector<std::pair<double, CVector>> branches;
  double total = 0.0;
  for (Eigen::Index j = 0; j < dc; ++j) {
    CVector cond = x * basis.col(j).conjugate();
    const double q = cond.squaredNorm();
    if (q <= 1e-14) continue;
    total += q;
    branches.emplace_back(q, std::move(cond));
  }
  std::vector<EnsembleEntry> entries;
  for (auto& [q, cond] : branches) {
    entries.push_back({q / total, PureState::normalized(std::move(cond), rest_layout)});
  }
  return Ensemble(std::move(entries));
}

inline Ensemble ensemble_from_helper_basis(const PureState& psi, const std::string& helper) {
  const auto dc = static_cast<Eigen::Index>(psi.layout()[psi.layout().index_of(helper)].dim);
  return ensemble_from_helper_basis(psi, helper, CMatrix::Identity(dc, dc));
}

/// Columns |+>, |-> (and the discrete Fourier basis for d > 2).
inline CMatrix fourier_basis(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  CMatrix f(n, n);
  const double pi = std::acos(-1.0);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      f(r, c) = std::polar(1.0 / std::sqrt(static_cast<double>(d)),
                           2.0 * pi * static_cast<double>(r * c) / static_cast<double>(d));
    }
  }
  return f;
}

}  // namespace eoalab

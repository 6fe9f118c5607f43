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
#include <sstream>
#include <string>
#include <vector>

#include "eoalab/errors.hpp"
#include "eoalab/qcore.hpp"
#include "eoalab/states.hpp"

namespace eoalab {

inline constexpr double kTracePreservingTolerance = 1e-10;

/// CPTP map A -> B in Kraus form.
class QuantumChannel {
 public:
  QuantumChannel(std::vector<CMatrix> kraus, std::string input_label = "A",
                 std::string output_label = "B")
      : kraus_(std::move(kraus)), in_(std::move(input_label)), out_(std::move(output_label)) {
    if (kraus_.empty()) throw ValidationError("channel needs at least one Kraus operator");
    const auto rows = kraus_.front().rows();
    const auto cols = kraus_.front().cols();
    if (rows < 1 || cols < 1) throw ValidationError("Kraus operators must be non-empty");
    CMatrix sum = CMatrix::Zero(cols, cols);
    for (const auto& k : kraus_) {
      if (k.rows() != rows || k.cols() != cols) {
        throw ValidationError("Kraus operators have inconsistent shapes");
      }
      sum += k.adjoint() * k;
    }
    const double residual = (sum - CMatrix::Identity(cols, cols)).norm();
    if (!(residual <= kTracePreservingTolerance)) {
      std::ostringstream msg;
      msg.precision(3);
      msg << "Kraus operators are not trace preserving: |sum K^dag K - I|_F = " << std::scientific
          << residual;
      throw ValidationError(msg.str());
    }
  }

  const std::vector<CMatrix>& kraus() const { return kraus_; }
  std::size_t d_in() const { return static_cast<std::size_t>(kraus_.front().cols()); }
  std::size_t d_out() const { return static_cast<std::size_t>(kraus_.front().rows()); }
  const std::string& input_label() const { return in_; }
  const std::string& output_label() const { return out_; }

  /// sum_k K rho K^dag on raw matrices.
  CMatrix apply(const CMatrix& rho) const {
    if (rho.rows() != static_cast<Eigen::Index>(d_in()) || rho.cols() != rho.rows()) {
      throw ValidationError("channel input has the wrong dimension");
    }
    CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(d_out()), static_cast<Eigen::Index>(d_out()));
    for (const auto& k : kraus_) out += k * rho * k.adjoint();
    return out;
  }

  /// Heisenberg picture sum_k K^dag x K.
  CMatrix adjoint_apply(const CMatrix& x) const {
    CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(d_in()), static_cast<Eigen::Index>(d_in()));
    for (const auto& k : kraus_) out += k.adjoint() * x * k;
    return out;
  }

 private:
  std::vector<CMatrix> kraus_;
  std::string in_, out_;
};

inline DensityOperator apply(const QuantumChannel& t, const DensityOperator& rho) {
  if (rho.dim() != t.d_in()) throw ValidationError("channel input has the wrong dimension");
  CMatrix out = t.apply(rho.matrix());
  out = 0.5 * (out + out.adjoint());
  return DensityOperator::trusted(std::move(out), Layout({{t.output_label(), t.d_out()}}));
}

/// T^{(x) n} with Kraus operators K_{i1} (x) ... (x) K_{in}.
inline QuantumChannel tensor_power(const QuantumChannel& t, std::size_t n) {
  if (n < 1) throw ValidationError("tensor power needs n >= 1");
  std::vector<CMatrix> ks = t.kraus();
  for (std::size_t c = 1; c < n; ++c) {
    std::vector<CMatrix> next;
    for (const auto& a : ks) {
      for (const auto& b : t.kraus()) next.push_back(kron(a, b));
    }
    ks = std::move(next);
  }
  return QuantumChannel(std::move(ks), t.input_label(), t.output_label());
}

// ---------------------------------------------------------------------------
// Choi-Jamiolkowski duality

/// (id (x) T) phi on A' B, together with the reference state phi on A' A.
struct ChoiState {
  DensityOperator rho;
  PureState reference;
};

/// (1/sqrt d) sum_i |i>|i> on A' A.
inline PureState max_entangled(std::size_t d, const std::string& ref = "A'",
                               const std::string& sys = "A") {
  const auto n = static_cast<Eigen::Index>(d);
  CVector v = CVector::Zero(n * n);
  for (Eigen::Index i = 0; i < n; ++i) v(i * n + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return PureState(std::move(v), Layout({{ref, d}, {sys, d}}));
}

/// Vectorization of (I (x) K) phi as a row-major A' x B coefficient matrix.
inline CVector choi_vector(const CMatrix& phi_coeff, const CMatrix& k) {
  const CMatrix m = phi_coeff * k.transpose();
  CVector v(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  }
  return v;
}

inline ChoiState choi(const QuantumChannel& t, const PureState& phi) {
  if (phi.layout().size() != 2 || phi.layout()[1].dim != t.d_in()) {
    throw ValidationError("reference state must be bipartite A' A with dim A = channel input");
  }
  const CMatrix coeff = coefficient_matrix(phi, {phi.layout()[0].label});
  const auto dim = static_cast<Eigen::Index>(phi.layout()[0].dim * t.d_out());
  CMatrix rho = CMatrix::Zero(dim, dim);
  for (const auto& k : t.kraus()) {
    const CVector v = choi_vector(coeff, k);
    rho += v * v.adjoint();
  }
  rho = 0.5 * (rho + rho.adjoint());
  Layout l({{phi.layout()[0].label, phi.layout()[0].dim}, {t.output_label(), t.d_out()}});
  return {DensityOperator::trusted(std::move(rho), std::move(l)), phi};
}

inline ChoiState choi(const QuantumChannel& t) { return choi(t, max_entangled(t.d_in())); }

/// Recovers a minimal Kraus set from a Choi state by inverting the reference
/// coefficient matrix on its support. Requires Schmidt rank d_A.
inline QuantumChannel channel_from_choi(const ChoiState& c, const std::string& input_label = "A") {
  const PureState& phi = c.reference;
  if (phi.layout().size() != 2) throw ValidationError("reference state must be bipartite");
  const CMatrix coeff = coefficient_matrix(phi, {phi.layout()[0].label});
  const auto d_ref = coeff.rows();
  const auto d_a = coeff.cols();
  if (c.rho.layout().size() != 2 || c.rho.layout()[0].dim != static_cast<std::size_t>(d_ref)) {
    throw ValidationError("Choi state layout does not match the reference");
  }
  const auto d_b = static_cast<Eigen::Index>(c.rho.layout()[1].dim);
  Eigen::JacobiSVD<CMatrix> svd(coeff, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv.size() < d_a || sv(d_a - 1) < 1e-9 * sv(0)) {
    throw ValidationError("reference state is not of full Schmidt rank on the input");
  }
  const CMatrix pinv = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
  const HermitianEigen eig = eig_hermitian(c.rho.matrix());
  std::vector<CMatrix> kraus;
  for (std::size_t i = 0; i < eig.values.size(); ++i) {
    if (eig.values[i] <= 1e-12) break;
    const CVector v = std::sqrt(eig.values[i]) * eig.vectors.col(static_cast<Eigen::Index>(i));
    const CMatrix m = Eigen::Map<const RowMajorCMatrix>(v.data(), d_ref, d_b);
    kraus.push_back((pinv * m).transpose());
  }
  return QuantumChannel(std::move(kraus), input_label, c.rho.layout()[1].label);
}

/// Channel whose Choi state, with respect to the maximally entangled input,
/// is `rho` on A' B (dim A' = d_A).
inline QuantumChannel channel_from_choi(const DensityOperator& rho) {
  if (rho.layout().size() != 2) throw ValidationError("Choi state must be bipartite");
  const std::size_t d = rho.layout()[0].dim;
  const std::string ref = rho.layout()[0].label;
  return channel_from_choi(ChoiState{rho, max_entangled(d, ref, ref + "_in")});
}

/// Isometry U: A -> B (x) E with tr_E U rho U^dag = T(rho); E has one level
/// per linearly independent Kraus operator.
struct StinespringDilation {
  CMatrix isometry;  // rows indexed b * d_env + e
  std::size_t d_out = 0;
  std::size_t d_env = 0;
};

/// Kraus operators from the eigenvectors of the Choi matrix (linearly
/// independent, so their number is the Choi rank).
inline QuantumChannel minimal_kraus(const QuantumChannel& t) {
  return channel_from_choi(choi(t).rho);
}

inline StinespringDilation stinespring(const QuantumChannel& t) {
  const QuantumChannel m = minimal_kraus(t);
  const auto r = static_cast<Eigen::Index>(m.kraus().size());
  const auto db = static_cast<Eigen::Index>(t.d_out());
  const auto da = static_cast<Eigen::Index>(t.d_in());
  CMatrix u = CMatrix::Zero(db * r, da);
  for (Eigen::Index k = 0; k < r; ++k) {
    for (Eigen::Index b = 0; b < db; ++b) u.row(b * r + k) = m.kraus()[static_cast<std::size_t>(k)].row(b);
  }
  return {std::move(u), t.d_out(), static_cast<std::size_t>(r)};
}

/// Output of the complementary channel rho -> tr_B U rho U^dag.
inline CMatrix complementary_output(const StinespringDilation& s, const CMatrix& rho) {
  const CMatrix full = s.isometry * rho * s.isometry.adjoint();
  const auto db = static_cast<Eigen::Index>(s.d_out);
  const auto de = static_cast<Eigen::Index>(s.d_env);
  CMatrix out = CMatrix::Zero(de, de);
  for (Eigen::Index b = 0; b < db; ++b) out += full.block(b * de, b * de, de, de);
  return out;
}

inline bool is_unital(const QuantumChannel& t, double tol = 1e-10) {
  if (t.d_in() != t.d_out()) throw ValidationError("unitality needs equal input and output dimension");
  const auto d = static_cast<Eigen::Index>(t.d_in());
  const CMatrix mixed = CMatrix::Identity(d, d) / static_cast<double>(d);
  return trace_norm_distance(t.apply(mixed), mixed) <= tol;
}

// ---------------------------------------------------------------------------
// Standard channels

namespace channels {

inline QuantumChannel identity(std::size_t d = 2) {
  const auto n = static_cast<Eigen::Index>(d);
  return QuantumChannel({CMatrix::Identity(n, n)});
}

inline QuantumChannel unitary(const CMatrix& u) {
  check_unitary(u);
  return QuantumChannel({u});
}

inline CMatrix weyl(std::size_t d, std::size_t a, std::size_t b) { return weyl_operator(d, a, b); }

/// rho -> (1 - p) rho + p tr(rho) I/d, p in [0, 1].
inline QuantumChannel depolarizing(double p, std::size_t d = 2) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("depolarizing parameter must lie in [0,1]");
  const double dd = static_cast<double>(d * d);
  std::vector<CMatrix> ks;
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      const double w = (a == 0 && b == 0) ? 1.0 - p + p / dd : p / dd;
      if (w > 0.0) ks.push_back(std::sqrt(w) * weyl(d, a, b));
    }
  }
  return QuantumChannel(std::move(ks));
}

/// Off-diagonal elements scaled by 1 - p (p = 1 dephases completely).
inline QuantumChannel dephasing(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("dephasing parameter must lie in [0,1]");
  std::vector<CMatrix> ks;
  ks.push_back(std::sqrt(1.0 - p / 2.0) * CMatrix::Identity(2, 2));
  if (p > 0.0) ks.push_back(std::sqrt(p / 2.0) * weyl(2, 0, 1));
  return QuantumChannel(std::move(ks));
}

inline QuantumChannel amplitude_damping(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ValidationError("damping parameter must lie in [0,1]");
  CMatrix k0 = CMatrix::Zero(2, 2), k1 = CMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return QuantumChannel({k0, k1});
}

/// The qutrit channel whose Choi state is the two-party marginal of the
/// totally antisymmetric state: rho -> (tr(rho) I - rho^T) / 2. Unital, but
/// not a mixture of unitaries.
inline QuantumChannel aharonov_choi() {
  const PureState a = make_aharonov();
  const auto labels = a.layout().labels();
  return channel_from_choi(reduced_state(a, {labels[0], labels[1]}));
}

}  // namespace channels
}  // namespace eoalab

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

// Dense complex linear algebra and entropic primitives.
//
// Indexing convention, used everywhere in the library and in the state file
// format: the first party is the most significant digit, i.e. the flat index
// of |i_1 i_2 ... i_m> is sum_k i_k * prod_{l>k} d_l.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "eoalab/errors.hpp"

namespace eoalab {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RowMajorCMatrix =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kNegativeEigenvalueTolerance = 1e-10;

/// A named tensor factor of a register.
struct Party {
  std::string label;
  std::size_t dim = 0;

  friend bool operator==(const Party&, const Party&) = default;
};

/// Ordered list of parties. Labels are unique; every dimension is at least 1
/// (helper registers of a pure-state purification may be trivial).
class Layout {
 public:
  Layout() = default;

  explicit Layout(std::vector<Party> parties) : parties_(std::move(parties)) {
    std::set<std::string> seen;
    for (const auto& p : parties_) {
      if (p.label.empty()) throw ValidationError("party label must be non-empty");
      if (p.dim < 1) throw ValidationError("party '" + p.label + "' has dimension 0");
      if (!seen.insert(p.label).second) {
        throw ValidationError("duplicate party label '" + p.label + "'");
      }
    }
  }

  Layout(std::initializer_list<Party> parties)
      : Layout(std::vector<Party>(parties)) {}

  std::size_t size() const { return parties_.size(); }
  bool empty() const { return parties_.empty(); }
  const std::vector<Party>& parties() const { return parties_; }
  const Party& operator[](std::size_t i) const { return parties_[i]; }

  std::size_t total_dim() const {
    std::size_t d = 1;
    for (const auto& p : parties_) d *= p.dim;
    return d;
  }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    out.reserve(parties_.size());
    for (const auto& p : parties_) out.push_back(p.label);
    return out;
  }

  bool contains(const std::string& label) const {
    return std::any_of(parties_.begin(), parties_.end(),
                       [&](const Party& p) { return p.label == label; });
  }

  std::size_t index_of(const std::string& label) const {
    for (std::size_t i = 0; i < parties_.size(); ++i) {
      if (parties_[i].label == label) return i;
    }
    throw ValidationError("unknown party label '" + label + "'");
  }

  /// Indices of the given labels, in the order given. Rejects duplicates.
  std::vector<std::size_t> indices_of(const std::vector<std::string>& labels) const {
    std::vector<std::size_t> out;
    out.reserve(labels.size());
    std::set<std::size_t> seen;
    for (const auto& l : labels) {
      const std::size_t i = index_of(l);
      if (!seen.insert(i).second) throw ValidationError("party '" + l + "' listed twice");
      out.push_back(i);
    }
    return out;
  }

  /// Indices not in `subset`, in layout order.
  std::vector<std::size_t> complement(const std::vector<std::size_t>& subset) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < parties_.size(); ++i) {
      if (std::find(subset.begin(), subset.end(), i) == subset.end()) out.push_back(i);
    }
    return out;
  }

  Layout select(const std::vector<std::size_t>& indices) const {
    std::vector<Party> out;
    out.reserve(indices.size());
    for (auto i : indices) out.push_back(parties_.at(i));
    return Layout(std::move(out));
  }

  std::size_t dim_of(const std::vector<std::size_t>& indices) const {
    std::size_t d = 1;
    for (auto i : indices) d *= parties_.at(i).dim;
    return d;
  }

  Layout concat(const Layout& other) const {
    std::vector<Party> out = parties_;
    out.insert(out.end(), other.parties_.begin(), other.parties_.end());
    return Layout(std::move(out));
  }

  friend bool operator==(const Layout&, const Layout&) = default;

 private:
  std::vector<Party> parties_;
};

namespace detail {

/// For a register reordered so that new party i is old party order[i],
/// returns old_flat_index[new_flat_index].
inline std::vector<Eigen::Index> permutation_map(const Layout& layout,
                                                 const std::vector<std::size_t>& order) {
  const std::size_t m = layout.size();
  if (order.size() != m) throw ValidationError("reordering must list every party once");
  std::vector<Eigen::Index> old_stride(m);
  Eigen::Index s = 1;
  for (std::size_t k = m; k-- > 0;) {
    old_stride[k] = s;
    s *= static_cast<Eigen::Index>(layout[k].dim);
  }
  const Eigen::Index total = s;
  std::vector<Eigen::Index> new_dim(m), step(m);
  for (std::size_t i = 0; i < m; ++i) {
    new_dim[i] = static_cast<Eigen::Index>(layout[order[i]].dim);
    step[i] = old_stride[order[i]];
  }
  std::vector<Eigen::Index> map(static_cast<std::size_t>(total));
  std::vector<Eigen::Index> digit(m, 0);
  Eigen::Index old_index = 0;
  for (Eigen::Index t = 0; t < total; ++t) {
    map[static_cast<std::size_t>(t)] = old_index;
    for (std::size_t i = m; i-- > 0;) {
      if (++digit[i] < new_dim[i]) {
        old_index += step[i];
        break;
      }
      digit[i] = 0;
      old_index -= step[i] * (new_dim[i] - 1);
    }
  }
  return map;
}

inline bool is_identity_order(const std::vector<std::size_t>& order) {
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] != i) return false;
  }
  return true;
}

}  // namespace detail

/// Unit vector on a labeled multipartite register.
class PureState {
 public:
  PureState(CVector amplitudes, Layout layout)
      : amplitudes_(std::move(amplitudes)), layout_(std::move(layout)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != layout_.total_dim()) {
      throw ValidationError("amplitude count " + std::to_string(amplitudes_.size()) +
                            " does not match layout dimension " +
                            std::to_string(layout_.total_dim()));
    }
    const double n2 = amplitudes_.squaredNorm();
    if (std::abs(n2 - 1.0) > kNormTolerance) {
      throw ValidationError("state is not normalized: |psi|^2 = " + std::to_string(n2));
    }
  }

  /// Normalizes `v` first; throws if it is zero.
  static PureState normalized(CVector v, Layout layout) {
    const double n = v.norm();
    if (!(n > 0.0)) throw ValidationError("cannot normalize the zero vector");
    v /= n;
    return PureState(std::move(v), std::move(layout));
  }

  const CVector& amplitudes() const { return amplitudes_; }
  cplx amplitude(Eigen::Index i) const { return amplitudes_(i); }
  const Layout& layout() const { return layout_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }

 private:
  CVector amplitudes_;
  Layout layout_;
};

/// Hermitian, positive semidefinite, unit-trace operator on a layout.
class DensityOperator {
 public:
  DensityOperator(CMatrix matrix, Layout layout)
      : matrix_(std::move(matrix)), layout_(std::move(layout)) {
    validate();
  }

  /// Skips validation. Only for results of operations that preserve the
  /// invariants by construction (partial traces, products, channel outputs).
  static DensityOperator trusted(CMatrix matrix, Layout layout) {
    DensityOperator d;
    d.matrix_ = std::move(matrix);
    d.layout_ = std::move(layout);
    return d;
  }

  static DensityOperator from_pure(const PureState& psi) {
    return trusted(psi.amplitudes() * psi.amplitudes().adjoint(), psi.layout());
  }

  static DensityOperator maximally_mixed(Layout layout) {
    const auto d = static_cast<Eigen::Index>(layout.total_dim());
    return trusted(CMatrix::Identity(d, d) / static_cast<double>(d), std::move(layout));
  }

  const CMatrix& matrix() const { return matrix_; }
  const Layout& layout() const { return layout_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

 private:
  DensityOperator() = default;

  void validate() const {
    if (matrix_.rows() != matrix_.cols()) throw ValidationError("density matrix must be square");
    if (static_cast<std::size_t>(matrix_.rows()) != layout_.total_dim()) {
      throw ValidationError("density matrix dimension does not match layout");
    }
    const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kHermitianTolerance) {
      throw ValidationError("density matrix is not Hermitian (deviation " +
                            std::to_string(herm) + ")");
    }
    const double tr = matrix_.trace().real();
    if (std::abs(tr - 1.0) > kTraceTolerance) {
      throw ValidationError("density matrix trace is " + std::to_string(tr));
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(matrix_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kNegativeEigenvalueTolerance) {
      throw ValidationError("density matrix has eigenvalue " +
                            std::to_string(es.eigenvalues().minCoeff()));
    }
  }

  CMatrix matrix_;
  Layout layout_;
};

/// Probability vector sorted descending. Used for eigenvalue spectra and for
/// squared Schmidt coefficients.
struct Spectrum {
  std::vector<double> values;

  /// Clips to [0,1] and sorts descending.
  static Spectrum from_values(std::vector<double> v) {
    for (auto& x : v) x = std::clamp(x, 0.0, 1.0);
    std::sort(v.begin(), v.end(), std::greater<>());
    return Spectrum{std::move(v)};
  }

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }
};

/// Shannon entropy in bits of a probability list, with 0 log 0 = 0.
inline double shannon_entropy(const std::vector<double>& p) {
  double s = 0.0;
  for (double x : p) {
    if (x > 0.0) s -= x * std::log2(x);
  }
  return s;
}

inline double entropy_bits(const Spectrum& spectrum) {
  return shannon_entropy(spectrum.values);
}

/// H2(p) = -p log p - (1-p) log(1-p), bits.
inline double binary_entropy(double p) {
  if (!(p >= -1e-15 && p <= 1.0 + 1e-15)) {
    throw ValidationError("binary_entropy argument " + std::to_string(p) + " outside [0,1]");
  }
  p = std::clamp(p, 0.0, 1.0);
  return shannon_entropy({p, 1.0 - p});
}

// ---------------------------------------------------------------------------
// Reordering and reshaping

/// Reorders the tensor factors of `psi` so that they follow `labels`.
inline PureState reorder(const PureState& psi, const std::vector<std::string>& labels) {
  const auto order = psi.layout().indices_of(labels);
  if (order.size() != psi.layout().size()) {
    throw ValidationError("reorder must name every party exactly once");
  }
  if (detail::is_identity_order(order)) return psi;
  const auto map = detail::permutation_map(psi.layout(), order);
  CVector out(psi.amplitudes().size());
  for (std::size_t t = 0; t < map.size(); ++t) {
    out(static_cast<Eigen::Index>(t)) = psi.amplitudes()(map[t]);
  }
  return PureState::normalized(std::move(out), psi.layout().select(order));
}

inline DensityOperator reorder(const DensityOperator& rho,
                               const std::vector<std::string>& labels) {
  const auto order = rho.layout().indices_of(labels);
  if (order.size() != rho.layout().size()) {
    throw ValidationError("reorder must name every party exactly once");
  }
  if (detail::is_identity_order(order)) return rho;
  const auto map = detail::permutation_map(rho.layout(), order);
  const auto d = static_cast<Eigen::Index>(map.size());
  CMatrix out(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) {
      out(r, c) = rho.matrix()(map[static_cast<std::size_t>(r)],
                               map[static_cast<std::size_t>(c)]);
    }
  }
  return DensityOperator::trusted(std::move(out), rho.layout().select(order));
}

/// Coefficient matrix of `psi` across the cut `left | rest`: rows index the
/// left parties (in the order given), columns the remaining parties in
/// layout order.
inline CMatrix coefficient_matrix(const PureState& psi, const std::vector<std::string>& left) {
  const auto& layout = psi.layout();
  const auto li = layout.indices_of(left);
  const auto ri = layout.complement(li);
  std::vector<std::size_t> order = li;
  order.insert(order.end(), ri.begin(), ri.end());
  const auto rows = static_cast<Eigen::Index>(layout.dim_of(li));
  const auto cols = static_cast<Eigen::Index>(layout.dim_of(ri));
  CMatrix out(rows, cols);
  if (detail::is_identity_order(order)) {
    out = Eigen::Map<const RowMajorCMatrix>(psi.amplitudes().data(), rows, cols);
    return out;
  }
  const auto map = detail::permutation_map(layout, order);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      out(r, c) = psi.amplitudes()(map[static_cast<std::size_t>(r * cols + c)]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Products and partial traces

inline PureState tensor(const PureState& a, const PureState& b) {
  const auto& va = a.amplitudes();
  const auto& vb = b.amplitudes();
  CVector out(va.size() * vb.size());
  for (Eigen::Index i = 0; i < va.size(); ++i) {
    out.segment(i * vb.size(), vb.size()) = va(i) * vb;
  }
  return PureState::normalized(std::move(out), a.layout().concat(b.layout()));
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator::trusted(kron(a.matrix(), b.matrix()),
                                  a.layout().concat(b.layout()));
}

/// Reduced density operator of a pure state on `keep` (kept parties appear in
/// layout order).
inline DensityOperator reduced_state(const PureState& psi, const std::vector<std::string>& keep) {
  if (keep.empty()) throw ValidationError("partial trace must keep at least one party");
  auto idx = psi.layout().indices_of(keep);
  std::sort(idx.begin(), idx.end());
  const CMatrix m = coefficient_matrix(psi, psi.layout().select(idx).labels());
  CMatrix rho = m * m.adjoint();
  return DensityOperator::trusted(std::move(rho), psi.layout().select(idx));
}

/// tr over every party not in `keep`. Kept parties appear in layout order.
inline DensityOperator partial_trace(const DensityOperator& rho,
                                     const std::vector<std::string>& keep) {
  if (keep.empty()) throw ValidationError("partial trace must keep at least one party");
  const auto& layout = rho.layout();
  auto ki = layout.indices_of(keep);
  std::sort(ki.begin(), ki.end());
  const auto ti = layout.complement(ki);
  std::vector<std::size_t> order = ki;
  order.insert(order.end(), ti.begin(), ti.end());
  const auto k = static_cast<Eigen::Index>(layout.dim_of(ki));
  const auto t = static_cast<Eigen::Index>(layout.dim_of(ti));
  const auto map = detail::permutation_map(layout, order);
  CMatrix out = CMatrix::Zero(k, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    for (Eigen::Index r = 0; r < k; ++r) {
      cplx acc = 0.0;
      for (Eigen::Index s = 0; s < t; ++s) {
        acc += rho.matrix()(map[static_cast<std::size_t>(r * t + s)],
                            map[static_cast<std::size_t>(c * t + s)]);
      }
      out(r, c) = acc;
    }
  }
  return DensityOperator::trusted(std::move(out), layout.select(ki));
}

// ---------------------------------------------------------------------------
// Spectra and entropies

struct HermitianEigen {
  std::vector<double> values;  // descending
  CMatrix vectors;             // column k belongs to values[k]
};

inline HermitianEigen eig_hermitian(const CMatrix& h) {
  if (h.rows() != h.cols()) throw ValidationError("eig_hermitian needs a square matrix");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance * scale) {
    throw ValidationError("eig_hermitian: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const auto n = h.rows();
  HermitianEigen out;
  out.values.resize(static_cast<std::size_t>(n));
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[static_cast<std::size_t>(k)] = es.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
  }
  return out;
}

inline Spectrum spectrum(const DensityOperator& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return Spectrum::from_values(std::vector<double>(ev.data(), ev.data() + ev.size()));
}

inline double von_neumann_entropy(const DensityOperator& rho) {
  return entropy_bits(spectrum(rho));
}

/// Squared singular values of `x` divided by |x|_F^2, descending, length
/// min(rows, cols). Computed from the Gram matrix of the smaller side.
inline Spectrum normalized_singular_spectrum(const CMatrix& x) {
  const double n2 = x.squaredNorm();
  if (!(n2 > 0.0)) throw ValidationError("zero coefficient matrix has no Schmidt spectrum");
  const CMatrix gram = (x.rows() <= x.cols()) ? CMatrix(x * x.adjoint())
                                              : CMatrix(x.adjoint() * x);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram, Eigen::EigenvaluesOnly);
  std::vector<double> v(static_cast<std::size_t>(gram.rows()));
  for (Eigen::Index i = 0; i < gram.rows(); ++i) v[static_cast<std::size_t>(i)] = es.eigenvalues()(i) / n2;
  return Spectrum::from_values(std::move(v));
}

/// Entanglement entropy of the (normalized) bipartite pure state whose
/// coefficient matrix is `x`.
inline double coefficient_entropy(const CMatrix& x) {
  return entropy_bits(normalized_singular_spectrum(x));
}

inline void check_bipartition(const Layout& layout, const std::vector<std::string>& left) {
  if (left.empty() || left.size() >= layout.size()) {
    throw ValidationError("a cut needs at least one party on each side");
  }
  (void)layout.indices_of(left);
}

inline constexpr double kSchmidtZero = 1e-13;

/// Nonzero squared Schmidt coefficients across `left | rest` (values at or
/// below kSchmidtZero are numerical zeros and dropped).
inline Spectrum schmidt(const PureState& psi, const std::vector<std::string>& left) {
  check_bipartition(psi.layout(), left);
  Spectrum s = normalized_singular_spectrum(coefficient_matrix(psi, left));
  while (s.values.size() > 1 && s.values.back() <= kSchmidtZero) s.values.pop_back();
  return s;
}

inline double entanglement_entropy(const PureState& psi, const std::vector<std::string>& left) {
  return entropy_bits(schmidt(psi, left));
}

/// Entropy of the marginal of a pure state on `parties` (0 if `parties` is
/// the whole register).
inline double marginal_entropy(const PureState& psi, const std::vector<std::string>& parties) {
  if (parties.empty() || parties.size() == psi.layout().size()) {
    (void)psi.layout().indices_of(parties);
    return 0.0;
  }
  return entanglement_entropy(psi, parties);
}

/// Trace norm |a - b|_1.
inline double trace_norm_distance(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError("trace distance: dimension mismatch");
  }
  const CMatrix d = a - b;
  const CMatrix h = 0.5 * (d + d.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

/// |rho - sigma|_1 (sum of absolute eigenvalues; ranges over [0,2]).
inline double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw ValidationError("trace distance: dimension mismatch");
  return trace_norm_distance(rho.matrix(), sigma.matrix());
}

/// <psi|rho|psi>.
inline double fidelity(const PureState& psi, const DensityOperator& rho) {
  if (psi.dim() != rho.dim()) throw ValidationError("fidelity: dimension mismatch");
  const double f = psi.amplitudes().dot(rho.matrix() * psi.amplitudes()).real();
  return std::clamp(f, 0.0, 1.0);
}

}  // namespace eoalab

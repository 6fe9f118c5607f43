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

// Pretty-good measurement decoders and their Naimark isometries.

#include <cmath>
#include <vector>

#include "eoalab/qcore.hpp"

namespace eoalab::distill {

/// POVM elements; when `has_complement` is set, the last element is the
/// projector onto the complement of the states' joint support (the "fail"
/// outcome).
struct Povm {
  std::vector<CMatrix> elements;
  bool has_complement = false;
  double success_probability = 0.0;  // (1/N) sum_b tr(rho_b D_b)

  std::size_t size() const { return elements.size(); }
  std::size_t decoded_outcomes() const { return elements.size() - (has_complement ? 1 : 0); }
};

/// Matrix square root (or inverse square root on the support) of a PSD
/// Hermitian matrix. Eigenvalues <= `cutoff` are treated as zero.
inline CMatrix psd_power(const CMatrix& h, double power, double cutoff = 0.0) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()));
  const auto& ev = es.eigenvalues();
  Eigen::VectorXd w(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    w(i) = ev(i) > cutoff ? std::pow(ev(i), power) : 0.0;
  }
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

/// D_b = S^{-1/2} rho_b S^{-1/2} with S = sum_g rho_g (pseudo-inverse on the
/// support). The complement of the support is appended as a final element
/// when it is non-trivial.
inline Povm pgm(const std::vector<CMatrix>& states) {
  if (states.empty()) throw ValidationError("pgm needs at least one state");
  const auto d = states.front().rows();
  CMatrix s = CMatrix::Zero(d, d);
  for (const auto& r : states) {
    if (r.rows() != d || r.cols() != d) throw ValidationError("pgm: states must share one dimension");
    s += r;
  }
  s = 0.5 * (s + s.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(s);
  const auto& ev = es.eigenvalues();
  const double cutoff = 1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  Eigen::VectorXd inv_sqrt(d);
  Eigen::VectorXd support(d);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const bool in = ev(i) > cutoff;
    inv_sqrt(i) = in ? 1.0 / std::sqrt(ev(i)) : 0.0;
    support(i) = in ? 1.0 : 0.0;
    rank += in ? 1 : 0;
  }
  const CMatrix& v = es.eigenvectors();
  const CMatrix s_inv_sqrt = v * inv_sqrt.asDiagonal() * v.adjoint();
  Povm out;
  double success = 0.0;
  for (const auto& r : states) {
    CMatrix e = s_inv_sqrt * r * s_inv_sqrt;
    e = 0.5 * (e + e.adjoint());
    success += (r * e).trace().real() / std::max(r.trace().real(), 1e-300);
    out.elements.push_back(std::move(e));
  }
  out.success_probability = success / static_cast<double>(states.size());
  if (rank < d) {
    const CMatrix comp = CMatrix::Identity(d, d) - v * support.asDiagonal() * v.adjoint();
    out.elements.push_back(comp);
    out.has_complement = true;
  }
  return out;
}

/// Deviation max|sum_k D_k - I|.
inline double povm_completeness_error(const std::vector<CMatrix>& elements) {
  const auto d = elements.front().rows();
  CMatrix s = CMatrix::Zero(d, d);
  for (const auto& e : elements) s += e;
  return (s - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
}

/// V = sum_k sqrt(D_k) (x) |k>, mapping C^d to C^d (x) C^K with the flag
/// register as the last (least significant) factor.
inline CMatrix decoder_isometry(const std::vector<CMatrix>& elements) {
  if (elements.empty()) throw ValidationError("decoder_isometry: empty POVM");
  const double err = povm_completeness_error(elements);
  if (err > 1e-10) {
    throw ValidationError("decoder_isometry: elements do not sum to the identity (error " +
                          std::to_string(err) + ")");
  }
  const auto d = elements.front().rows();
  const auto k = static_cast<Eigen::Index>(elements.size());
  CMatrix v = CMatrix::Zero(d * k, d);
  for (Eigen::Index f = 0; f < k; ++f) {
    const CMatrix root = psd_power(elements[static_cast<std::size_t>(f)], 0.5);
    for (Eigen::Index i = 0; i < d; ++i) v.row(i * k + f) = root.row(i);
  }
  return v;
}

inline CMatrix decoder_isometry(const Povm& povm) { return decoder_isometry(povm.elements); }

}  // namespace eoalab::distill

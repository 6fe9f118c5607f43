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

// Approximating a channel by a convex mixture of unitaries (isometries when
// d_out > d_in) under the fixed-source criterion
//     |rho_T^{(x) n} - (id (x) T')(phi^{(x) n})|_1,
// phi maximally entangled. This is not the cb-norm. The distance found is
// only an upper value for the true optimum over k-term mixtures.
//
// Each term is U = B exp(iH) with B the current base and H Hermitian. H is
// improved by coordinate pattern search and folded into B after every sweep.
// Weights are softmax logits. Terms are added one at a time (k = 1, 2, ...)
// starting from the previous optimum, so the reported distance never
// increases with k.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "eoalab/channels/channel.hpp"
#include "eoalab/parallel.hpp"
#include "eoalab/random.hpp"

namespace eoalab {

struct UnitaryMixture {
  std::vector<double> weights;
  std::vector<CMatrix> unitaries;  // d_out^n x d_in^n isometries
};

struct FitOptions {
  std::size_t max_sweeps = 400;
  double initial_step = 0.5;
  double min_step = 1e-9;
  std::size_t threads = 1;
};

struct FitRestart {
  std::size_t restart = 0;
  std::vector<double> distance_by_k;  // index k-1
};

struct FitReport {
  std::string metric = "fixed-source Choi trace norm";
  std::size_t n_copies = 1;
  std::size_t k_terms = 1;
  std::size_t restarts = 1;
  std::uint64_t seed = 0;
  double distance = 0.0;              // best at k_terms
  std::vector<double> distance_by_k;  // best over restarts, index k-1
  UnitaryMixture mixture;
  std::vector<FitRestart> trace;
};

/// Choi matrix of a weighted isometry mixture for a maximally entangled input.
inline CMatrix mixture_choi(const UnitaryMixture& m) {
  const auto dout = m.unitaries.front().rows();
  const auto din = m.unitaries.front().cols();
  CMatrix rho = CMatrix::Zero(din * dout, din * dout);
  const double scale = 1.0 / static_cast<double>(din);
  for (std::size_t i = 0; i < m.unitaries.size(); ++i) {
    const CMatrix& u = m.unitaries[i];
    CVector v(din * dout);
    for (Eigen::Index a = 0; a < din; ++a) {
      for (Eigen::Index b = 0; b < dout; ++b) v(a * dout + b) = u(b, a);
    }
    rho += (m.weights[i] * scale) * (v * v.adjoint());
  }
  return rho;
}

namespace detail {

inline CMatrix hermitian_from(const double* x, Eigen::Index d) {
  CMatrix h(d, d);
  std::size_t p = 0;
  for (Eigen::Index i = 0; i < d; ++i) h(i, i) = x[p++];
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      h(i, j) = cplx(x[p], x[p + 1]);
      h(j, i) = std::conj(h(i, j));
      p += 2;
    }
  }
  return h;
}

inline CMatrix expi(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  CVector ph(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) ph(i) = std::polar(1.0, es.eigenvalues()(i));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

/// Closest unitary in Frobenius norm (polar factor), for seeding.
inline CMatrix polar_unitary(const CMatrix& k) {
  Eigen::JacobiSVD<CMatrix> svd(k, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

class MixtureSearch {
 public:
  MixtureSearch(const CMatrix& target, Eigen::Index d_out, Eigen::Index d_in)
      : target_(target), dout_(d_out), din_(d_in) {}

  void set(std::vector<CMatrix> bases, std::vector<double> logits) {
    bases_ = std::move(bases);
    logits_ = std::move(logits);
  }

  UnitaryMixture mixture() const { return build(gens_zero()); }

  double distance(const UnitaryMixture& m, bool smooth) const {
    const CMatrix d = mixture_choi(m) - target_;
    if (smooth) return d.norm();
    return trace_norm_distance(mixture_choi(m), target_);
  }

  /// Pattern search on generators and logits; returns the final distance.
  double run(const FitOptions& opt, bool smooth) {
    const std::size_t per = static_cast<std::size_t>(dout_ * dout_);
    const std::size_t k = bases_.size();
    std::vector<double> x(k * per + k, 0.0);
    for (std::size_t i = 0; i < k; ++i) x[k * per + i] = logits_[i];
    auto eval = [&](const std::vector<double>& p) { return distance(build(p), smooth); };
    double best = eval(x);
    double step = opt.initial_step;
    for (std::size_t sweep = 0; sweep < opt.max_sweeps && step >= opt.min_step; ++sweep) {
      bool improved = false;
      for (std::size_t c = 0; c < x.size(); ++c) {
        for (double dir : {1.0, -1.0}) {
          const double keep = x[c];
          x[c] = keep + dir * step;
          const double v = eval(x);
          if (v < best) {
            best = v;
            improved = true;
            break;
          }
          x[c] = keep;
        }
      }
      absorb(x);
      if (!improved) step *= 0.5;
    }
    return best;
  }

 private:
  std::vector<double> gens_zero() const {
    std::vector<double> x(bases_.size() * static_cast<std::size_t>(dout_ * dout_) + bases_.size(), 0.0);
    for (std::size_t i = 0; i < bases_.size(); ++i) x[x.size() - bases_.size() + i] = logits_[i];
    return x;
  }

  UnitaryMixture build(const std::vector<double>& x) const {
    const std::size_t per = static_cast<std::size_t>(dout_ * dout_);
    const std::size_t k = bases_.size();
    UnitaryMixture m;
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) mx = std::max(mx, x[k * per + i]);
    double z = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      m.weights.push_back(std::exp(x[k * per + i] - mx));
      z += m.weights.back();
    }
    for (auto& w : m.weights) w /= z;
    for (std::size_t i = 0; i < k; ++i) {
      const CMatrix u = bases_[i] * expi(hermitian_from(x.data() + i * per, dout_));
      m.unitaries.push_back(u.leftCols(din_));
    }
    return m;
  }

  void absorb(std::vector<double>& x) {
    const std::size_t per = static_cast<std::size_t>(dout_ * dout_);
    const std::size_t k = bases_.size();
    for (std::size_t i = 0; i < k; ++i) {
      bases_[i] = bases_[i] * expi(hermitian_from(x.data() + i * per, dout_));
      std::fill(x.begin() + static_cast<std::ptrdiff_t>(i * per),
                x.begin() + static_cast<std::ptrdiff_t>((i + 1) * per), 0.0);
      logits_[i] = x[k * per + i];
    }
  }

  CMatrix target_;
  Eigen::Index dout_, din_;
  std::vector<CMatrix> bases_;  // full d_out unitaries; the first d_in columns are used
  std::vector<double> logits_;
};

/// Unitary completion of an isometry-like seed (columns beyond d_in arbitrary).
inline CMatrix complete_unitary(const CMatrix& v, Eigen::Index d_out, Rng& rng) {
  CMatrix g = gaussian_matrix(d_out, d_out, rng);
  g.leftCols(v.cols()) = v;
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d_out, d_out);
  // restore the phases of the seed columns
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    const cplx ov = q.col(c).dot(v.col(c));
    if (std::abs(ov) > 0.0) q.col(c) *= ov / std::abs(ov);
  }
  return q;
}

}  // namespace detail

inline FitReport fit_unitary_mixture(const QuantumChannel& t, std::size_t n_copies, std::size_t k_terms,
                                     std::size_t restarts, std::uint64_t seed,
                                     const FitOptions& opt = {}) {
  if (n_copies < 1 || k_terms < 1 || restarts < 1) {
    throw ValidationError("n_copies, k_terms and restarts must be >= 1");
  }
  if (t.d_out() < t.d_in()) throw ValidationError("isometry fitting needs d_out >= d_in");
  const QuantumChannel tn = tensor_power(t, n_copies);
  const auto din = static_cast<Eigen::Index>(tn.d_in());
  const auto dout = static_cast<Eigen::Index>(tn.d_out());
  check_operator_size(static_cast<double>(din * dout), static_cast<double>(din * dout),
                      memory_cap_bytes(), "Choi matrix");
  const CMatrix target = choi(tn).rho.matrix();
  // spectral seed: polar factors of the dominant minimal Kraus operators
  const QuantumChannel minimal = minimal_kraus(tn);

  FitReport rep;
  rep.n_copies = n_copies;
  rep.k_terms = k_terms;
  rep.restarts = restarts;
  rep.seed = seed;
  std::vector<FitRestart> traces(restarts);
  std::vector<UnitaryMixture> finals(restarts);
  parallel_for(restarts, opt.threads, [&](std::size_t r) {
    Rng rng(derive_seed(seed, r));
    detail::MixtureSearch search(target, dout, din);
    std::vector<CMatrix> bases;
    std::vector<double> logits;
    FitRestart tr;
    tr.restart = r;
    UnitaryMixture prev;
    for (std::size_t k = 1; k <= k_terms; ++k) {
      const std::size_t j = k - 1;
      if (r == 0 && j < minimal.kraus().size()) {
        bases.push_back(detail::complete_unitary(detail::polar_unitary(minimal.kraus()[j]), dout, rng));
        logits.push_back(std::log(std::max(minimal.kraus()[j].squaredNorm() / static_cast<double>(din), 1e-6)));
      } else {
        bases.push_back(haar_unitary(dout, rng));
        logits.push_back(k == 1 ? 0.0 : std::log(1.0 / static_cast<double>(k)));
      }
      search.set(bases, logits);
      search.run(opt, true);
      search.run(opt, false);
      UnitaryMixture m = search.mixture();
      double dist = search.distance(m, false);
      if (k > 1 && dist > tr.distance_by_k.back()) {
        // keep the (k-1)-term optimum, padded with an unused term
        m = prev;
        m.weights.push_back(0.0);
        m.unitaries.push_back(search.mixture().unitaries.back());
        dist = tr.distance_by_k.back();
      }
      tr.distance_by_k.push_back(dist);
      prev = m;
      // continue from the accepted mixture
      bases.clear();
      logits.clear();
      for (std::size_t i = 0; i < m.unitaries.size(); ++i) {
        bases.push_back(detail::complete_unitary(m.unitaries[i], dout, rng));
        logits.push_back(std::log(std::max(m.weights[i], 1e-12)));
      }
    }
    traces[r] = std::move(tr);
    finals[r] = std::move(prev);
  });
  rep.distance_by_k.assign(k_terms, std::numeric_limits<double>::infinity());
  std::size_t best = 0;
  for (std::size_t r = 0; r < restarts; ++r) {
    for (std::size_t k = 0; k < k_terms; ++k) {
      rep.distance_by_k[k] = std::min(rep.distance_by_k[k], traces[r].distance_by_k[k]);
    }
    if (traces[r].distance_by_k.back() < traces[best].distance_by_k.back()) best = r;
  }
  rep.distance = rep.distance_by_k.back();
  rep.mixture = finals[best];
  rep.trace = std::move(traces);
  return rep;
}

}  // namespace eoalab

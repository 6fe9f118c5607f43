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

// Environment-assisted capacity max_rho min{S(rho), S(T(rho))}.
//
// The objective is concave, so we run a Frank-Wolfe ascent over density
// matrices from I/d. Away from the kink the active branch supplies the
// supergradient. At the kink every convex combination of the two branch
// gradients is a supergradient, so we scan a few of them and keep the step
// with the best exact line search. The same combinations give a certified
// upper value at the final iterate.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "eoalab/channels/channel.hpp"

namespace eoalab {

struct CapacityOptions {
  double tol = 1e-9;            // stop when the best step improves by less
  std::size_t max_iter = 2000;
  std::size_t kink_samples = 11;  // lambda grid for the combined gradients
  std::size_t line_search_iters = 80;
};

struct CapacityResult {
  double capacity = 0.0;      // best value found, bits
  double upper_value = 0.0;   // concavity certificate at the final iterate
  CMatrix argmax;
  double input_entropy = 0.0;
  double output_entropy = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

namespace detail {

inline double entropy_of(const CMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return entropy_bits(Spectrum::from_values(std::vector<double>(ev.data(), ev.data() + ev.size())));
}

/// Gradient of S (bits) at rho: -log2(rho) - I/ln 2, with eigenvalues floored
/// to keep the logarithm finite on the boundary.
inline CMatrix entropy_gradient(const CMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho + rho.adjoint()));
  const auto& ev = es.eigenvalues();
  Eigen::VectorXd g(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    g(i) = -std::log2(std::max(ev(i), 1e-300)) - 1.0 / std::log(2.0);
  }
  return es.eigenvectors() * g.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

inline double capacity_objective(const QuantumChannel& t, const CMatrix& rho) {
  return std::min(detail::entropy_of(rho), detail::entropy_of(t.apply(rho)));
}

inline CapacityResult env_assisted_capacity(const QuantumChannel& t, const CapacityOptions& opt = {}) {
  const auto d = static_cast<Eigen::Index>(t.d_in());
  CMatrix rho = CMatrix::Identity(d, d) / static_cast<double>(d);
  double f = capacity_objective(t, rho);
  const std::size_t samples = std::max<std::size_t>(2, opt.kink_samples);
  CapacityResult res;
  auto value_at = [&](const CMatrix& a, const CMatrix& b, double s) {
    return capacity_objective(t, (1.0 - s) * a + s * b);
  };
  std::size_t it = 0;
  for (; it < opt.max_iter; ++it) {
    const CMatrix g1 = detail::entropy_gradient(rho);
    const CMatrix g2 = t.adjoint_apply(detail::entropy_gradient(t.apply(rho)));
    double best = f;
    CMatrix best_rho = rho;
    for (std::size_t s = 0; s < samples; ++s) {
      const double lam = static_cast<double>(s) / static_cast<double>(samples - 1);
      const CMatrix g = lam * g1 + (1.0 - lam) * g2;
      const HermitianEigen eg = eig_hermitian(0.5 * (g + g.adjoint()));
      const CVector v = eg.vectors.col(0);
      const CMatrix sigma = v * v.adjoint();
      // golden-section search on the concave restriction
      const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
      double lo = 0.0, hi = 1.0;
      double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
      double f1 = value_at(rho, sigma, x1), f2 = value_at(rho, sigma, x2);
      for (std::size_t k = 0; k < opt.line_search_iters; ++k) {
        if (f1 < f2) {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + phi * (hi - lo);
          f2 = value_at(rho, sigma, x2);
        } else {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - phi * (hi - lo);
          f1 = value_at(rho, sigma, x1);
        }
      }
      const double step = 0.5 * (lo + hi);
      const double fs = value_at(rho, sigma, step);
      if (fs > best) {
        best = fs;
        best_rho = (1.0 - step) * rho + step * sigma;
      }
    }
    const double gain = best - f;
    if (gain > 0.0) {
      rho = 0.5 * (best_rho + best_rho.adjoint());
      f = best;
    }
    if (!(gain > opt.tol)) break;
  }
  // Certificate: f(sigma) <= lam S(rho) + (1-lam) S(T rho) + tr G_lam (sigma - rho).
  const double s1 = detail::entropy_of(rho);
  const double s2 = detail::entropy_of(t.apply(rho));
  const CMatrix g1 = detail::entropy_gradient(rho);
  const CMatrix g2 = t.adjoint_apply(detail::entropy_gradient(t.apply(rho)));
  double upper = std::numeric_limits<double>::infinity();
  const std::size_t fine = 101;
  for (std::size_t s = 0; s < fine; ++s) {
    const double lam = static_cast<double>(s) / static_cast<double>(fine - 1);
    const CMatrix g = lam * g1 + (1.0 - lam) * g2;
    const CMatrix h = 0.5 * (g + g.adjoint());
    const double top = eig_hermitian(h).values.front();
    upper = std::min(upper, lam * s1 + (1.0 - lam) * s2 + top - (h * rho).trace().real());
  }
  res.capacity = f;
  res.upper_value = std::max(upper, f);
  res.argmax = rho;
  res.input_entropy = s1;
  res.output_entropy = s2;
  res.iterations = it;
  res.converged = it < opt.max_iter;
  return res;
}

}  // namespace eoalab

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

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace eoalab {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; maps (master seed, stream index) to a child seed so
/// trials can run in any order and still reproduce.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Eigen::MatrixXcd gaussian_matrix(Eigen::Index rows, Eigen::Index cols,
                                        Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = {re, im};
    }
  }
  return g;
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of diag(R) pushed into Q.
inline Eigen::MatrixXcd haar_unitary(Eigen::Index dim, Rng& rng) {
  const Eigen::MatrixXcd g = gaussian_matrix(dim, dim, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, dim);
  const Eigen::MatrixXcd& r = qr.matrixQR();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const std::complex<double> d = r(k, k);
    const double mag = std::abs(d);
    q.col(k) *= (mag > 0.0) ? d / mag : std::complex<double>(1.0, 0.0);
  }
  return q;
}

/// Haar-random unit vector of the given dimension.
inline Eigen::VectorXcd haar_vector(Eigen::Index dim, Rng& rng) {
  Eigen::VectorXcd v = gaussian_matrix(dim, 1, rng).col(0);
  v.normalize();
  return v;
}

}  // namespace eoalab

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

// Deliberately naive reference computations used to cross-check the
// library: explicit index loops, general (non-Hermitian) eigen solvers and
// brute-force constructions. Slow, but written without reusing library code
// beyond the basic matrix types.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Mixed-radix digits of idx, first factor most significant.
inline std::vector<std::size_t> digits(std::size_t idx, const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> d(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    d[k] = idx % dims[k];
    idx /= dims[k];
  }
  return d;
}

inline std::size_t index_of(const std::vector<std::size_t>& d, const std::vector<std::size_t>& dims) {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + d[k];
  return idx;
}

inline std::size_t product(const std::vector<std::size_t>& dims) {
  std::size_t p = 1;
  for (auto d : dims) p *= d;
  return p;
}

/// tr over every factor not in `keep` (kept factors stay in their order).
inline Mat partial_trace(const Mat& rho, const std::vector<std::size_t>& dims,
                         const std::vector<std::size_t>& keep) {
  std::vector<std::size_t> kd;
  for (auto k : keep) kd.push_back(dims[k]);
  const std::size_t dk = product(kd);
  Mat out = Mat::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  const std::size_t total = product(dims);
  for (std::size_t i = 0; i < total; ++i) {
    const auto di = digits(i, dims);
    for (std::size_t j = 0; j < total; ++j) {
      const auto dj = digits(j, dims);
      bool diag = true;
      for (std::size_t k = 0; k < dims.size() && diag; ++k) {
        if (std::find(keep.begin(), keep.end(), k) == keep.end() && di[k] != dj[k]) diag = false;
      }
      if (!diag) continue;
      std::vector<std::size_t> ki, kj;
      for (auto k : keep) {
        ki.push_back(di[k]);
        kj.push_back(dj[k]);
      }
      out(static_cast<Eigen::Index>(index_of(ki, kd)), static_cast<Eigen::Index>(index_of(kj, kd))) +=
          rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

inline Mat projector(const Vec& v) { return v * v.adjoint(); }

/// Eigenvalues via the general complex solver, real parts, descending.
inline std::vector<double> eigenvalues(const Mat& m) {
  Eigen::ComplexEigenSolver<Mat> es(m, false);
  std::vector<double> v;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) v.push_back(es.eigenvalues()(i).real());
  std::sort(v.rbegin(), v.rend());
  return v;
}

inline double entropy(const Mat& rho) {
  double s = 0.0;
  for (double x : eigenvalues(rho)) {
    if (x > 1e-15) s -= x * std::log(x) / std::log(2.0);
  }
  return s;
}

inline double h2(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

inline double trace_norm(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues().sum();
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Vec kron(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// Permutes tensor factors: factor k of the output is factor order[k] of v.
inline Vec permute(const Vec& v, const std::vector<std::size_t>& dims, const std::vector<std::size_t>& order) {
  std::vector<std::size_t> nd;
  for (auto k : order) nd.push_back(dims[k]);
  Vec out(v.size());
  for (std::size_t i = 0; i < static_cast<std::size_t>(v.size()); ++i) {
    const auto di = digits(i, dims);
    std::vector<std::size_t> dn;
    for (auto k : order) dn.push_back(di[k]);
    out(static_cast<Eigen::Index>(index_of(dn, nd))) = v(static_cast<Eigen::Index>(i));
  }
  return out;
}

/// Entanglement entropy of |v> across the first `left` factors.
inline double cut_entropy(const Vec& v, const std::vector<std::size_t>& dims, std::size_t left) {
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < left; ++k) keep.push_back(k);
  const Vec n = v / v.norm();
  return entropy(partial_trace(projector(n), dims, keep));
}

/// Wootters concurrence from the general eigenvalues of rho rho~.
inline double concurrence(const Mat& rho) {
  Mat yy = Mat::Zero(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Mat r = rho * yy * rho.conjugate() * yy;
  auto ev = eigenvalues(r);
  for (auto& x : ev) x = std::sqrt(std::max(0.0, x));
  return std::max(0.0, ev[0] - ev[1] - ev[2] - ev[3]);
}

/// Haar unitary by Gram-Schmidt on Gaussian columns.
template <class Gen>
Mat haar(Eigen::Index d, Gen& gen) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat u(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    Vec v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = cplx(g(gen), g(gen));
    for (Eigen::Index k = 0; k < j; ++k) v -= u.col(k).dot(v) * u.col(k);
    u.col(j) = v / v.norm();
  }
  return u;
}

/// f(h) through the general eigen-decomposition of a Hermitian matrix,
/// eigenvalues below `cut` mapped to zero.
template <class F>
Mat matrix_function(const Mat& h, F f, double cut) {
  Eigen::ComplexEigenSolver<Mat> es(0.5 * (h + h.adjoint()));
  // Orthonormalize eigenvectors within degenerate groups.
  Mat v = es.eigenvectors();
  const Eigen::Index d = h.rows();
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) idx[static_cast<std::size_t>(i)] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) {
    return es.eigenvalues()(a).real() < es.eigenvalues()(b).real();
  });
  Mat basis(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    Vec x = v.col(idx[static_cast<std::size_t>(k)]);
    for (Eigen::Index j = 0; j < k; ++j) x -= basis.col(j).dot(x) * basis.col(j);
    basis.col(k) = x / x.norm();
  }
  const Mat rot = basis.adjoint() * h * basis;
  Mat out = Mat::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double lam = rot(k, k).real();
    if (lam > cut) out += f(lam) * basis.col(k) * basis.col(k).adjoint();
  }
  return out;
}

/// Pretty good measurement D_b = S^{-1/2} rho_b S^{-1/2}, plus the complement
/// of the support when it is non-trivial.
inline std::vector<Mat> pgm(const std::vector<Mat>& states) {
  Mat s = Mat::Zero(states[0].rows(), states[0].cols());
  for (const auto& r : states) s += r;
  const Mat inv = matrix_function(s, [](double x) { return 1.0 / std::sqrt(x); }, 1e-10);
  const Mat support = matrix_function(s, [](double) { return 1.0; }, 1e-10);
  std::vector<Mat> out;
  for (const auto& r : states) out.push_back(inv * r * inv);
  const Mat comp = Mat::Identity(s.rows(), s.cols()) - support;
  if (comp.norm() > 1e-8) out.push_back(comp);
  return out;
}

inline Mat sqrt_psd(const Mat& m) {
  return matrix_function(m, [](double x) { return std::sqrt(x); }, 1e-14);
}

/// Environment-assisted capacity of amplitude damping by a Bloch-plane grid.
/// Rotations about z commute with the channel, so y = 0 loses nothing; a
/// coarse grid is followed by two rounds of local refinement.
inline double amplitude_damping_capacity_grid(double gamma) {
  auto value = [gamma](double x, double z) {
    const double r = std::hypot(x, z);
    if (r > 1.0) return -1.0;
    const double xo = x * std::sqrt(1.0 - gamma);
    const double zo = gamma + (1.0 - gamma) * z;
    const double ro = std::min(1.0, std::hypot(xo, zo));
    return std::min(h2((1.0 + r) / 2.0), h2((1.0 + ro) / 2.0));
  };
  double bx = 0.0, bz = 0.0, best = value(0.0, 0.0);
  double lo_x = -1.0, hi_x = 1.0, lo_z = -1.0, hi_z = 1.0;
  for (int round = 0; round < 3; ++round) {
    const int steps = 400;
    for (int i = 0; i <= steps; ++i) {
      for (int j = 0; j <= steps; ++j) {
        const double x = lo_x + (hi_x - lo_x) * i / steps;
        const double z = lo_z + (hi_z - lo_z) * j / steps;
        const double v = value(x, z);
        if (v > best) {
          best = v;
          bx = x;
          bz = z;
        }
      }
    }
    const double w = (hi_x - lo_x) / 20.0;
    lo_x = bx - w;
    hi_x = bx + w;
    lo_z = bz - w;
    hi_z = bz + w;
  }
  return best;
}

using Word = std::vector<std::uint32_t>;

inline Mat kron_power(const std::vector<Mat>& letters, const Word& w) {
  Mat out = letters[w[0]];
  for (std::size_t k = 1; k < w.size(); ++k) out = kron(out, letters[w[k]]);
  return out;
}

/// Row-major flattening of a coefficient matrix.
inline Vec flatten(const Mat& x) {
  Vec v(x.size());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) v(i * x.cols() + j) = x(i, j);
  }
  return v;
}

/// Output position k takes input position sigma[k]; the k-th occurrence of a
/// letter in `target` is matched to its k-th occurrence in `word`.
inline std::vector<std::size_t> match_positions(const Word& word, const Word& target) {
  std::vector<std::size_t> sigma(target.size());
  std::vector<bool> used(word.size(), false);
  for (std::size_t k = 0; k < target.size(); ++k) {
    for (std::size_t i = 0; i < word.size(); ++i) {
      if (!used[i] && word[i] == target[k]) {
        used[i] = true;
        sigma[k] = i;
        break;
      }
    }
  }
  return sigma;
}

/// Unitary permuting n blocks of dimension d.
inline Mat block_permutation(std::size_t n, std::size_t d, const std::vector<std::size_t>& sigma) {
  const std::vector<std::size_t> dims(n, d);
  const auto total = static_cast<Eigen::Index>(product(dims));
  Mat p(total, total);
  for (Eigen::Index i = 0; i < total; ++i) p.col(i) = permute(Vec::Unit(total, i), dims, sigma);
  return p;
}

/// Fidelity of the coherent GHZ protocol output with
/// psi_ref (x) N^{-1/2} sum_b |b>|b>|b>, computed by composing explicit
/// operators on the full register (A^n F_A)(B^n F_B) C'.
inline double ghz_fidelity(const std::vector<Mat>& branches, const std::vector<Word>& code,
                           const Word& reference) {
  const std::size_t n = reference.size();
  const std::size_t nw = code.size();
  const auto da = static_cast<std::size_t>(branches[0].rows());
  const auto db = static_cast<std::size_t>(branches[0].cols());
  std::vector<Mat> x, ra, rb;
  for (const auto& w : code) {
    x.push_back(kron_power(branches, w));
    ra.push_back(x.back() * x.back().adjoint());
    rb.push_back(x.back().transpose() * x.back().conjugate());
  }
  auto side = [&](const std::vector<Mat>& states, std::size_t d) {
    const auto povm = pgm(states);
    const auto dim = states[0].rows();
    const auto k = static_cast<Eigen::Index>(povm.size());
    Mat v = Mat::Zero(dim * k, dim);  // A^n (x) F, flag least significant
    Mat c = Mat::Zero(dim * k, dim * k);
    for (Eigen::Index f = 0; f < k; ++f) {
      const Mat root = sqrt_psd(povm[static_cast<std::size_t>(f)]);
      const Mat flag = Vec::Unit(k, f) * Vec::Unit(k, f).transpose();
      v += kron(root, Mat(Vec::Unit(k, f)));
      const Mat perm = static_cast<std::size_t>(f) < nw
                           ? block_permutation(n, d, match_positions(code[static_cast<std::size_t>(f)], reference))
                           : Mat(Mat::Identity(dim, dim));
      c += kron(perm, flag);
    }
    return Mat(c * v);
  };
  const Mat wa = side(ra, da);
  const Mat wb = side(rb, db);
  const Mat w = kron(wa, wb);
  const auto kc = static_cast<Eigen::Index>(nw);
  Vec final_state = Vec::Zero(w.rows() * kc);
  for (std::size_t b = 0; b < nw; ++b) {
    final_state += kron(Vec(w * flatten(x[b])), Vec(Vec::Unit(kc, static_cast<Eigen::Index>(b)))) /
                   std::sqrt(static_cast<double>(nw));
  }
  // Target in the same register order.
  const Mat ref = kron_power(branches, reference);
  const auto ka = wa.rows() / ref.rows();
  const auto kb = wb.rows() / ref.cols();
  Vec target = Vec::Zero(final_state.size());
  for (std::size_t b = 0; b < nw; ++b) {
    const auto bi = static_cast<Eigen::Index>(b);
    Mat tb = Mat::Zero(ref.rows() * ka, ref.cols() * kb);
    for (Eigen::Index i = 0; i < ref.rows(); ++i) {
      for (Eigen::Index j = 0; j < ref.cols(); ++j) tb(i * ka + bi, j * kb + bi) = ref(i, j);
    }
    target += kron(flatten(tb), Vec(Vec::Unit(kc, bi))) / std::sqrt(static_cast<double>(nw));
  }
  return std::norm(target.dot(final_state));
}

/// Monte-Carlo estimate of the mean |theta^a - (psi^a)^{(x)n}|_1 when the
/// fourth party measures n copies of `psi` (parties a, b, c, d, qubits or
/// otherwise) with a Fourier vector over N codewords drawn i.i.d. from its
/// computational-basis distribution, reweighted by q_J^{-1/2}.
inline double four_party_marginal_distance(const Vec& psi, const std::vector<std::size_t>& dims,
                                           std::size_t n, std::size_t n_words, std::size_t trials,
                                           std::uint64_t seed) {
  const std::size_t dd = dims[3];
  const std::size_t dabc = dims[0] * dims[1] * dims[2];
  std::vector<double> q(dd, 0.0);
  for (std::size_t i = 0; i < dabc; ++i) {
    for (std::size_t j = 0; j < dd; ++j) q[j] += std::norm(psi(static_cast<Eigen::Index>(i * dd + j)));
  }
  // psi^{(x)n}, copy-major.
  Vec full = psi;
  std::vector<std::size_t> fdims = dims;
  for (std::size_t k = 1; k < n; ++k) {
    full = kron(full, psi);
    fdims.insert(fdims.end(), dims.begin(), dims.end());
  }
  // Move every d factor to the end, and the a factors to the front.
  std::vector<std::size_t> order, odims;
  for (std::size_t s : {0, 1, 2, 3}) {
    for (std::size_t k = 0; k < n; ++k) order.push_back(4 * k + s);
  }
  for (auto o : order) odims.push_back(fdims[o]);
  const Vec sorted = permute(full, fdims, order);
  const std::size_t dn = static_cast<std::size_t>(std::pow(dd, n));
  const std::size_t rest = static_cast<std::size_t>(sorted.size()) / dn;
  const std::size_t dan = static_cast<std::size_t>(std::pow(dims[0], n));

  std::vector<std::size_t> pdims = dims;
  const Mat one = partial_trace(projector(psi), pdims, {0});
  Mat target = one;
  for (std::size_t k = 1; k < n; ++k) target = kron(target, one);

  std::mt19937_64 gen(seed);
  std::discrete_distribution<std::size_t> letter(q.begin(), q.end());
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double pi = std::acos(-1.0);
  double total = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<std::size_t> word_index(n_words);
    std::vector<double> weight(n_words);
    for (std::size_t b = 0; b < n_words; ++b) {
      std::size_t idx = 0;
      double qj = 1.0;
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t l = letter(gen);
        idx = idx * dd + l;
        qj *= q[l];
      }
      word_index[b] = idx;
      weight[b] = 1.0 / std::sqrt(qj);
    }
    std::vector<Vec> theta;
    std::vector<double> p;
    double norm = 0.0;
    for (std::size_t al = 0; al < n_words; ++al) {
      Vec v = Vec::Zero(static_cast<Eigen::Index>(rest));
      for (std::size_t b = 0; b < n_words; ++b) {
        const cplx ph = std::polar(1.0, -2.0 * pi * static_cast<double>((al * b) % n_words) /
                                            static_cast<double>(n_words));
        for (std::size_t r = 0; r < rest; ++r) {
          v(static_cast<Eigen::Index>(r)) +=
              ph * weight[b] * sorted(static_cast<Eigen::Index>(r * dn + word_index[b]));
        }
      }
      v /= std::sqrt(static_cast<double>(n_words));
      p.push_back(v.squaredNorm());
      norm += p.back();
      theta.push_back(std::move(v));
    }
    double u = unif(gen) * norm;
    std::size_t pick = 0;
    while (pick + 1 < n_words && u >= p[pick]) u -= p[pick++];
    const Vec th = theta[pick] / theta[pick].norm();
    Mat m(static_cast<Eigen::Index>(dan), static_cast<Eigen::Index>(rest / dan));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = th(i * m.cols() + j);
    }
    total += trace_norm(Mat(m * m.adjoint()) - target);
  }
  return total / static_cast<double>(trials);
}

}  // namespace oracle

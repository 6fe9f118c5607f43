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

// Type classes of classical sequences, codes drawn from them, and the Fourier
// (phase) superpositions of codewords that form the helper's measurement.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "eoalab/qcore.hpp"
#include "eoalab/random.hpp"

namespace eoalab::distill {

using Sequence = std::vector<std::uint32_t>;

/// Default cap on alphabet^n for anything that enumerates sequences.
inline constexpr double kDefaultSequenceCap = 1 << 24;

/// n!/(prod_j counts_j!) as a double (exact below 2^53).
inline double multinomial(const std::vector<std::size_t>& counts) {
  double lg = 0.0;
  std::size_t n = 0;
  for (auto c : counts) {
    n += c;
    lg -= std::lgamma(static_cast<double>(c) + 1.0);
  }
  lg += std::lgamma(static_cast<double>(n) + 1.0);
  return std::round(std::exp(lg));
}

/// C(n, k) as a double.
inline double binomial(double n, double k) {
  if (k < 0 || k > n) return 0.0;
  return std::round(std::exp(std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1)));
}

/// The set of length-n sequences over {0..alphabet-1} in which letter j
/// occurs exactly counts[j] times.
struct TypeClass {
  std::size_t n = 0;
  std::vector<std::size_t> counts;

  std::size_t alphabet() const { return counts.size(); }

  /// P(j) = counts[j] / n.
  std::vector<double> distribution() const {
    std::vector<double> p(counts.size());
    for (std::size_t j = 0; j < counts.size(); ++j) {
      p[j] = static_cast<double>(counts[j]) / static_cast<double>(n);
    }
    return p;
  }

  /// M, the number of member sequences.
  double size() const { return multinomial(counts); }

  bool contains(const Sequence& s) const {
    if (s.size() != n) return false;
    std::vector<std::size_t> c(counts.size(), 0);
    for (auto x : s) {
      if (x >= counts.size()) return false;
      ++c[x];
    }
    return c == counts;
  }

  /// Lexicographically first member (letters in ascending order).
  Sequence first() const {
    Sequence s;
    s.reserve(n);
    for (std::uint32_t j = 0; j < counts.size(); ++j) s.insert(s.end(), counts[j], j);
    return s;
  }

  /// All members in lexicographic order.
  std::vector<Sequence> members() const {
    std::vector<Sequence> out;
    Sequence s = first();
    do {
      out.push_back(s);
    } while (std::next_permutation(s.begin(), s.end()));
    return out;
  }

  friend bool operator==(const TypeClass&, const TypeClass&) = default;
};

/// Flat index of |j_1 ... j_n> in helper^n (first letter most significant).
inline std::size_t sequence_index(const Sequence& s, std::size_t alphabet) {
  std::size_t idx = 0;
  for (auto x : s) idx = idx * alphabet + x;
  return idx;
}

inline Sequence sequence_from_index(std::size_t idx, std::size_t n, std::size_t alphabet) {
  Sequence s(n);
  for (std::size_t k = n; k-- > 0;) {
    s[k] = static_cast<std::uint32_t>(idx % alphabet);
    idx /= alphabet;
  }
  return s;
}

/// Every type class for length n over the alphabet; the classes partition
/// all alphabet^n sequences. Ordered lexicographically by count vector,
/// descending (so (n,0,...,0) comes first).
inline std::vector<TypeClass> enumerate_types(std::size_t n, std::size_t alphabet,
                                              double cap = kDefaultSequenceCap) {
  if (n < 1) throw ValidationError("enumerate_types needs n >= 1");
  if (alphabet < 1) throw ValidationError("enumerate_types needs a non-empty alphabet");
  if (std::pow(static_cast<double>(alphabet), static_cast<double>(n)) > cap) {
    throw ResourceCapExceeded("alphabet^n = " + std::to_string(alphabet) + "^" +
                              std::to_string(n) + " exceeds the sequence cap");
  }
  std::vector<TypeClass> out;
  std::vector<std::size_t> counts(alphabet, 0);
  auto rec = [&](auto&& self, std::size_t pos, std::size_t left) -> void {
    if (pos + 1 == alphabet) {
      counts[pos] = left;
      out.push_back(TypeClass{n, counts});
      return;
    }
    for (std::size_t c = left + 1; c-- > 0;) {
      counts[pos] = c;
      self(self, pos + 1, left - c);
    }
  };
  rec(rec, 0, n);
  return out;
}

/// Diagonal projector onto span{|J> : J of type t} in helper^n.
inline CMatrix type_projector(const TypeClass& t) {
  const auto dim = static_cast<Eigen::Index>(
      std::llround(std::pow(static_cast<double>(t.alphabet()), static_cast<double>(t.n))));
  CMatrix p = CMatrix::Zero(dim, dim);
  for (const auto& s : t.members()) {
    const auto i = static_cast<Eigen::Index>(sequence_index(s, t.alphabet()));
    p(i, i) = 1.0;
  }
  return p;
}

/// An ordered list of codewords J^(0..N-1). Codes built with of_type() hold
/// distinct words of a single type; iid() codes may repeat words.
class Code {
 public:
  static Code of_type(const TypeClass& t, std::vector<Sequence> words) {
    if (words.empty()) throw ValidationError("a code needs at least one word");
    std::set<Sequence> seen;
    for (const auto& w : words) {
      if (!t.contains(w)) throw ValidationError("codeword is not of the code's type");
      if (!seen.insert(w).second) throw ValidationError("codewords must be distinct");
    }
    Code c;
    c.alphabet_ = t.alphabet();
    c.n_ = t.n;
    c.type_ = t;
    c.words_ = std::move(words);
    return c;
  }

  static Code iid(std::size_t alphabet, std::vector<Sequence> words) {
    if (words.empty()) throw ValidationError("a code needs at least one word");
    Code c;
    c.alphabet_ = alphabet;
    c.n_ = words.front().size();
    for (const auto& w : words) {
      if (w.size() != c.n_) throw ValidationError("codewords must share one length");
      for (auto x : w) {
        if (x >= alphabet) throw ValidationError("codeword letter outside the alphabet");
      }
    }
    c.words_ = std::move(words);
    return c;
  }

  std::size_t size() const { return words_.size(); }
  std::size_t n() const { return n_; }
  std::size_t alphabet() const { return alphabet_; }
  const std::vector<Sequence>& words() const { return words_; }
  const Sequence& operator[](std::size_t i) const { return words_[i]; }
  const std::optional<TypeClass>& type() const { return type_; }

 private:
  Code() = default;
  std::size_t alphabet_ = 0;
  std::size_t n_ = 0;
  std::optional<TypeClass> type_;
  std::vector<Sequence> words_;
};

inline Layout helper_layout(std::size_t n, std::size_t alphabet, const std::string& prefix = "C") {
  std::vector<Party> p;
  for (std::size_t k = 0; k < n; ++k) p.push_back({prefix + std::to_string(k + 1), alphabet});
  return Layout(std::move(p));
}

/// exp(2 pi i alpha beta / N).
inline cplx fourier_phase(std::size_t alpha, std::size_t beta, std::size_t n_words) {
  const double pi = std::acos(-1.0);
  const auto ab = static_cast<double>((alpha * beta) % n_words);
  return std::polar(1.0, 2.0 * pi * ab / static_cast<double>(n_words));
}

/// (1/sqrt N) sum_beta exp(2 pi i alpha beta / N) |J^(beta)> on helper^n.
inline PureState fourier_state(const Code& code, std::size_t alpha) {
  const std::size_t n_words = code.size();
  if (alpha >= n_words) throw ValidationError("fourier_state: alpha out of range");
  const Layout layout = helper_layout(code.n(), code.alphabet());
  CVector v = CVector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
  const double amp = 1.0 / std::sqrt(static_cast<double>(n_words));
  for (std::size_t beta = 0; beta < n_words; ++beta) {
    const auto i = static_cast<Eigen::Index>(sequence_index(code[beta], code.alphabet()));
    v(i) += amp * fourier_phase(alpha, beta, n_words);
  }
  return PureState::normalized(std::move(v), layout);
}

/// c such that (c/N) sum over all N-subsets J of type t and all alpha of
/// |t_J(alpha)><t_J(alpha)| equals the type projector: each sequence lies in
/// C(M-1, N-1) of the subsets, so c = N / C(M-1, N-1).
inline double povm_constant(const TypeClass& t, std::size_t n_words) {
  const double m = t.size();
  if (n_words < 1 || static_cast<double>(n_words) > m) {
    throw ValidationError("povm_constant: need 1 <= N <= M");
  }
  return static_cast<double>(n_words) / binomial(m - 1.0, static_cast<double>(n_words) - 1.0);
}

/// N uniformly random distinct members of t, in sampled order.
inline Code sample_type_code(const TypeClass& t, std::size_t n_words, Rng& rng) {
  std::vector<Sequence> members = t.members();
  if (n_words < 1 || n_words > members.size()) {
    throw ValidationError("sample_type_code: need 1 <= N <= M");
  }
  for (std::size_t i = 0; i < n_words; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, members.size() - 1);
    std::swap(members[i], members[pick(rng)]);
  }
  members.resize(n_words);
  return Code::of_type(t, std::move(members));
}

/// Every N-subset of the members of t, each as a code in lexicographic
/// member order. Refuses more than `max_codes` subsets.
inline std::vector<Code> enumerate_type_codes(const TypeClass& t, std::size_t n_words,
                                              double max_codes = 1e5) {
  const std::vector<Sequence> members = t.members();
  const double count = binomial(static_cast<double>(members.size()), static_cast<double>(n_words));
  if (count > max_codes) throw ResourceCapExceeded("too many codes to enumerate");
  std::vector<Code> out;
  std::vector<bool> pick(members.size(), false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(n_words), true);
  do {
    std::vector<Sequence> w;
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (pick[i]) w.push_back(members[i]);
    }
    out.push_back(Code::of_type(t, std::move(w)));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

/// N = max(1, floor(2^{n (rate)})), capped at `cap`.
inline std::size_t code_size_for_rate(std::size_t n, double rate, double cap) {
  const double raw = std::floor(std::exp2(static_cast<double>(n) * rate));
  const double v = std::clamp(raw, 1.0, std::max(1.0, cap));
  return static_cast<std::size_t>(v);
}

}  // namespace eoalab::distill

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

// Named builtin states and channels, addressed as "name" or "name:arg[:arg]".

#include <cmath>
#include <string>
#include <vector>

#include "eoalab/channels/channel.hpp"
#include "eoalab/errors.hpp"
#include "eoalab/states.hpp"

namespace eoalab {

struct CatalogEntry {
  std::string name;  // with argument placeholders
  std::string kind;  // "state" or "channel"
  std::string description;
};

/// Stable, documented list of builtin names.
inline const std::vector<CatalogEntry>& builtin_catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"epr[:d]", "state", "maximally entangled pair on A B, local dimension d (default 2)"},
      {"ghz:m[:d]", "state", "m-party GHZ state, local dimension d (default 2)"},
      {"w", "state", "three-qubit W state on A B C"},
      {"upsilon:a2", "state", "sqrt(a2)|0>|Phi+> + sqrt(1-a2)|1>|Phi-> on A B C, a2 in [0, 1/2]"},
      {"aharonov", "state", "totally antisymmetric three-qutrit state on A B C"},
      {"aharonov2", "state", "two copies of the antisymmetric state, parties A1 B1 C1 A2 B2 C2"},
      {"example1-phi", "state", "the 2.5-ebit witness vector on A1 A2 B1 B2"},
      {"identity[:d]", "channel", "identity channel, dimension d (default 2)"},
      {"depolarizing:p[:d]", "channel", "rho -> (1-p) rho + p I/d"},
      {"dephasing:p", "channel", "qubit; off-diagonals scaled by 1-p"},
      {"amplitude-damping:g", "channel", "qubit amplitude damping with decay probability g"},
      {"aharonov-choi", "channel", "unital qutrit channel (tr(rho) I - rho^T)/2, Choi state = two-party marginal of the antisymmetric state"},
  };
  return entries;
}

namespace detail {

inline std::vector<std::string> split_name(const std::string& spec) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = spec.find(':', start);
    parts.push_back(spec.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

inline double number_arg(const std::vector<std::string>& p, std::size_t i, const std::string& spec) {
  if (i >= p.size()) throw ValidationError("builtin '" + spec + "' needs an argument");
  try {
    std::size_t used = 0;
    const double v = std::stod(p[i], &used);
    if (used != p[i].size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ValidationError("builtin '" + spec + "': bad number '" + p[i] + "'");
  }
}

inline std::size_t count_arg(const std::vector<std::string>& p, std::size_t i, const std::string& spec,
                             std::size_t fallback, std::size_t min_value) {
  if (i >= p.size()) return fallback;
  const double v = number_arg(p, i, spec);
  if (v != std::floor(v) || v < static_cast<double>(min_value) || v > 1e6) {
    throw ValidationError("builtin '" + spec + "': bad integer '" + p[i] + "'");
  }
  return static_cast<std::size_t>(v);
}

inline void max_args(const std::vector<std::string>& p, std::size_t n, const std::string& spec) {
  if (p.size() > n + 1) throw ValidationError("builtin '" + spec + "': too many arguments");
}

}  // namespace detail

inline PureState make_aharonov_pair() {
  PureState a = make_aharonov();
  auto relabel = [](const PureState& s, const std::string& suffix) {
    std::vector<Party> p;
    for (const auto& party : s.layout().parties()) p.push_back({party.label + suffix, party.dim});
    return PureState(s.amplitudes(), Layout(std::move(p)));
  };
  return tensor(relabel(a, "1"), relabel(a, "2"));
}

inline PureState builtin_state(const std::string& spec) {
  const auto p = detail::split_name(spec);
  const std::string& name = p[0];
  if (name == "epr") {
    detail::max_args(p, 1, spec);
    return make_epr(detail::count_arg(p, 1, spec, 2, 2));
  }
  if (name == "ghz") {
    detail::max_args(p, 2, spec);
    if (p.size() < 2) throw ValidationError("builtin 'ghz' needs the number of parties, e.g. ghz:4");
    return make_ghz(detail::count_arg(p, 1, spec, 3, 2), detail::count_arg(p, 2, spec, 2, 2));
  }
  if (name == "w") {
    detail::max_args(p, 0, spec);
    return make_w();
  }
  if (name == "upsilon") {
    detail::max_args(p, 1, spec);
    return make_upsilon(detail::number_arg(p, 1, spec));
  }
  if (name == "aharonov") {
    detail::max_args(p, 0, spec);
    return make_aharonov();
  }
  if (name == "aharonov2") {
    detail::max_args(p, 0, spec);
    return make_aharonov_pair();
  }
  if (name == "example1-phi") {
    detail::max_args(p, 0, spec);
    return make_example1_phi();
  }
  throw ValidationError("unknown builtin state '" + spec + "'");
}

inline QuantumChannel builtin_channel(const std::string& spec) {
  const auto p = detail::split_name(spec);
  const std::string& name = p[0];
  if (name == "identity") {
    detail::max_args(p, 1, spec);
    return channels::identity(detail::count_arg(p, 1, spec, 2, 1));
  }
  if (name == "depolarizing") {
    detail::max_args(p, 2, spec);
    return channels::depolarizing(detail::number_arg(p, 1, spec), detail::count_arg(p, 2, spec, 2, 2));
  }
  if (name == "dephasing") {
    detail::max_args(p, 1, spec);
    return channels::dephasing(detail::number_arg(p, 1, spec));
  }
  if (name == "amplitude-damping") {
    detail::max_args(p, 1, spec);
    return channels::amplitude_damping(detail::number_arg(p, 1, spec));
  }
  if (name == "aharonov-choi") {
    detail::max_args(p, 0, spec);
    return channels::aharonov_choi();
  }
  throw ValidationError("unknown builtin channel '" + spec + "'");
}

}  // namespace eoalab

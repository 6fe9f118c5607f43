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

// JSON state and channel files.
//   state:   {"parties":[{"label":..,"dim":..}],"amplitudes":[[re,im],...]}
//   channel: {"d_in":..,"d_out":..,"kraus":[[[re,im],...],...]}
// Kraus operators are written row-major as flat lists of d_out*d_in entries;
// nested row lists are accepted on input. Numbers are written with 17
// significant digits so a write/read cycle reproduces every double exactly.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"  // vendored nlohmann::json

#include "eoalab/channels/channel.hpp"
#include "eoalab/errors.hpp"
#include "eoalab/qcore.hpp"

namespace eoalab::io {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

inline void append_complex(std::string& out, cplx z) {
  out += '[';
  out += format_double(z.real());
  out += ',';
  out += format_double(z.imag());
  out += ']';
}

inline std::string escape(const std::string& s) { return nlohmann::json(s).dump(); }

inline nlohmann::json parse(const std::string& text, const char* what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string(what) + ": malformed JSON: " + e.what());
  }
}

inline cplx complex_from(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ValidationError(std::string(what) + ": complex numbers must be [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline std::size_t positive_int(const nlohmann::json& j, const char* key, const char* what) {
  if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() < 1) {
    throw ValidationError(std::string(what) + ": '" + key + "' must be a positive integer");
  }
  return static_cast<std::size_t>(j[key].get<long long>());
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
}

}  // namespace detail

inline std::string state_to_json(const PureState& psi) {
  std::string out = "{\"parties\":[";
  const auto& l = psi.layout();
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (i) out += ',';
    out += "{\"label\":" + detail::escape(l[i].label) + ",\"dim\":" + std::to_string(l[i].dim) + "}";
  }
  out += "],\"amplitudes\":[";
  for (Eigen::Index i = 0; i < psi.amplitudes().size(); ++i) {
    if (i) out += ',';
    detail::append_complex(out, psi.amplitudes()(i));
  }
  out += "]}\n";
  return out;
}

inline PureState state_from_json(const std::string& text) {
  const auto j = detail::parse(text, "state file");
  if (!j.is_object() || !j.contains("parties") || !j["parties"].is_array() ||
      !j.contains("amplitudes") || !j["amplitudes"].is_array()) {
    throw ValidationError("state file: need 'parties' and 'amplitudes' arrays");
  }
  std::vector<Party> parties;
  for (const auto& p : j["parties"]) {
    if (!p.is_object() || !p.contains("label") || !p["label"].is_string()) {
      throw ValidationError("state file: every party needs a string 'label'");
    }
    parties.push_back({p["label"].get<std::string>(), detail::positive_int(p, "dim", "state file")});
  }
  Layout layout(std::move(parties));
  const auto& amps = j["amplitudes"];
  if (amps.size() != layout.total_dim()) {
    throw ValidationError("state file: expected " + std::to_string(layout.total_dim()) +
                          " amplitudes, found " + std::to_string(amps.size()));
  }
  CVector v(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t i = 0; i < amps.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = detail::complex_from(amps[i], "state file");
  }
  return PureState(std::move(v), std::move(layout));
}

inline std::string channel_to_json(const QuantumChannel& t) {
  std::string out = "{\"d_in\":" + std::to_string(t.d_in()) + ",\"d_out\":" +
                    std::to_string(t.d_out()) + ",\"kraus\":[";
  for (std::size_t k = 0; k < t.kraus().size(); ++k) {
    if (k) out += ',';
    out += '[';
    const CMatrix& m = t.kraus()[k];
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (r || c) out += ',';
        detail::append_complex(out, m(r, c));
      }
    }
    out += ']';
  }
  out += "]}\n";
  return out;
}

inline QuantumChannel channel_from_json(const std::string& text) {
  const auto j = detail::parse(text, "channel file");
  if (!j.is_object()) throw ValidationError("channel file: expected an object");
  const std::size_t din = detail::positive_int(j, "d_in", "channel file");
  const std::size_t dout = detail::positive_int(j, "d_out", "channel file");
  if (!j.contains("kraus") || !j["kraus"].is_array() || j["kraus"].empty()) {
    throw ValidationError("channel file: 'kraus' must be a non-empty array");
  }
  const auto rows = static_cast<Eigen::Index>(dout);
  const auto cols = static_cast<Eigen::Index>(din);
  std::vector<CMatrix> ks;
  for (const auto& k : j["kraus"]) {
    if (!k.is_array()) throw ValidationError("channel file: each Kraus operator must be an array");
    CMatrix m(rows, cols);
    const bool nested = k.size() == dout && !k.empty() && k[0].is_array() &&
                        (k[0].empty() || k[0][0].is_array());
    if (nested) {
      for (std::size_t r = 0; r < dout; ++r) {
        if (!k[r].is_array() || k[r].size() != din) {
          throw ValidationError("channel file: Kraus rows must have d_in entries");
        }
        for (std::size_t c = 0; c < din; ++c) {
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
              detail::complex_from(k[r][c], "channel file");
        }
      }
    } else {
      if (k.size() != din * dout) {
        throw ValidationError("channel file: Kraus operator needs d_out*d_in = " +
                              std::to_string(din * dout) + " entries, found " +
                              std::to_string(k.size()));
      }
      for (std::size_t i = 0; i < k.size(); ++i) {
        m(static_cast<Eigen::Index>(i / din), static_cast<Eigen::Index>(i % din)) =
            detail::complex_from(k[i], "channel file");
      }
    }
    ks.push_back(std::move(m));
  }
  return QuantumChannel(std::move(ks));
}

inline PureState read_state(const std::string& path) { return state_from_json(detail::read_file(path)); }
inline void write_state(const std::string& path, const PureState& psi) {
  detail::write_file(path, state_to_json(psi));
}
inline QuantumChannel read_channel(const std::string& path) {
  return channel_from_json(detail::read_file(path));
}
inline void write_channel(const std::string& path, const QuantumChannel& t) {
  detail::write_file(path, channel_to_json(t));
}

}  // namespace eoalab::io

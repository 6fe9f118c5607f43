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

// Report objects as ordered JSON, and three renderings of the same tree:
// JSON and CSV print every double with 17 significant digits, text mode
// rounds to 5 decimals. CSV flattens the tree to "path,value" rows.

#include <cmath>
#include <cstdio>
#include <string>

#include "json.hpp"  // vendored nlohmann::json

#include "eoalab/channels.hpp"
#include "eoalab/distill/protocols.hpp"
#include "eoalab/measures.hpp"

namespace eoalab::report {

using Json = nlohmann::ordered_json;

enum class Format { kJson, kCsv, kText };

namespace detail {

inline std::string number(double v, bool full) {
  if (!std::isfinite(v)) return full ? "null" : (std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf"));
  char buf[48];
  std::snprintf(buf, sizeof(buf), full ? "%.17g" : "%.5f", v);
  std::string s = buf;
  if (full && s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

inline std::string scalar(const Json& j, bool full) {
  if (j.is_number_float()) return number(j.get<double>(), full);
  if (j.is_string()) return full ? j.dump() : j.get<std::string>();
  return j.dump();
}

inline void json_out(const Json& j, std::string& out) {
  if (j.is_object()) {
    out += '{';
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      if (!first) out += ',';
      first = false;
      out += Json(k).dump();
      out += ':';
      json_out(v, out);
    }
    out += '}';
  } else if (j.is_array()) {
    out += '[';
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) out += ',';
      json_out(j[i], out);
    }
    out += ']';
  } else {
    out += scalar(j, true);
  }
}

inline std::string csv_field(std::string s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

inline void csv_out(const Json& j, const std::string& path, std::string& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) csv_out(v, path.empty() ? k : path + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) csv_out(j[i], path + "." + std::to_string(i), out);
  } else {
    out += csv_field(path) + "," + csv_field(j.is_string() ? j.get<std::string>() : scalar(j, true)) + "\n";
  }
}

inline bool is_flat_numbers(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& v : j) {
    if (!v.is_number()) return false;
  }
  return true;
}

inline void text_out(const Json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const auto& [k, v] : j.items()) {
    if (v.is_object()) {
      out += pad + k + ":\n";
      text_out(v, indent + 2, out);
    } else if (is_flat_numbers(v)) {
      out += pad + k + ": [";
      for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + scalar(v[i], false);
      out += "]\n";
    } else if (v.is_array()) {
      out += pad + k + ":\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].is_object()) {
          out += pad + "  - [" + std::to_string(i) + "]\n";
          text_out(v[i], indent + 4, out);
        } else {
          out += pad + "  - " + scalar(v[i], false) + "\n";
        }
      }
    } else {
      out += pad + k + ": " + scalar(v, false) + "\n";
    }
  }
}

}  // namespace detail

inline std::string render(const Json& j, Format f) {
  std::string out;
  switch (f) {
    case Format::kJson:
      detail::json_out(j, out);
      out += '\n';
      break;
    case Format::kCsv:
      out = "key,value\n";
      detail::csv_out(j, "", out);
      break;
    case Format::kText:
      if (j.is_object()) {
        detail::text_out(j, 0, out);
      } else {
        out = detail::scalar(j, false) + "\n";
      }
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Report objects

inline Json spectrum_json(const Spectrum& s) { return Json(s.values); }

inline Json ensemble_json(const Ensemble& e) {
  Json out = Json::array();
  for (const auto& m : e.entries()) {
    Json amps = Json::array();
    for (Eigen::Index i = 0; i < m.state.amplitudes().size(); ++i) {
      amps.push_back({m.state.amplitudes()(i).real(), m.state.amplitudes()(i).imag()});
    }
    out.push_back({{"probability", m.probability}, {"amplitudes", std::move(amps)}});
  }
  return out;
}

inline Json to_json(const EoAReport& r, bool with_witness) {
  Json j;
  j["lower_bound"] = r.lower_bound;
  j["upper_bound"] = r.upper_bound;
  j["trace"] = {{"restarts", r.trace.restarts},
                {"best_restart", r.trace.best_restart},
                {"iterations", r.trace.iterations},
                {"total_sweeps", r.trace.total_sweeps},
                {"final_gradient_norm", r.trace.final_gradient_norm},
                {"converged", r.trace.converged},
                {"restart_values", r.trace.restart_values}};
  if (with_witness) j["witness"] = ensemble_json(r.witness);
  return j;
}

inline Json to_json(const distill::DistillationReport& r, bool per_trial = true) {
  Json j;
  j["protocol"] = r.protocol;
  j["n"] = r.n;
  j["delta"] = r.delta;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["mean_rate"] = r.mean_rate;
  j["std"] = r.std;
  j["upper_bound"] = r.upper_bound;
  j["abort_rate"] = r.abort_rate;
  j["eta"] = r.eta;
  j["measurement"] = r.measurement;
  j["std_error"] = r.std_error;
  j["chi"] = r.chi;
  j["avg_entanglement"] = r.avg_entanglement;
  j["mean_predicted_rate"] = r.mean_predicted_rate;
  if (r.analytic_checked) j["max_analytic_excess"] = r.max_analytic_excess;
  Json trials = Json::array();
  if (per_trial) {
    for (const auto& t : r.per_trial) {
      Json x;
      x["trial"] = t.trial;
      x["type"] = t.type_counts;
      x["code_size"] = t.code_size;
      x["alpha"] = t.alpha;
      x["probability"] = t.probability;
      x["aborted"] = t.aborted;
      if (t.aborted) x["abort_reason"] = t.abort_reason;
      x["entanglement"] = t.entanglement;
      x["rate"] = t.rate;
      if (t.analytic) {
        x["analytic_average"] = t.analytic->average;
        x["analytic_bound"] = t.analytic->bound;
      }
      trials.push_back(std::move(x));
    }
  }
  j["per_trial"] = std::move(trials);
  return j;
}

inline Json to_json(const distill::GhzReport& r, bool per_trial = true) {
  Json j;
  j["protocol"] = r.protocol;
  j["n"] = r.n;
  j["delta"] = r.delta;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["mean_rate"] = r.mean_ghz_rate;
  j["std"] = r.std;
  j["upper_bound"] = r.upper_bound;
  j["abort_rate"] = r.abort_rate;
  j["eta"] = r.eta;
  j["mean_fidelity"] = r.mean_fidelity;
  j["min_fidelity"] = r.min_fidelity;
  j["mean_epr_rate"] = r.mean_epr_rate;
  j["chi"] = r.chi;
  j["avg_entanglement"] = r.avg_entanglement;
  Json trials = Json::array();
  if (per_trial) {
    for (const auto& t : r.per_trial) {
      Json x;
      x["trial"] = t.trial;
      x["type"] = t.type_counts;
      x["code_size"] = t.code_size;
      x["aborted"] = t.aborted;
      if (t.aborted) x["abort_reason"] = t.abort_reason;
      x["fidelity"] = t.fidelity;
      x["ghz_bits"] = t.ghz_bits;
      x["epr_bits"] = t.epr_bits;
      x["decoder_success_a"] = t.decoder_success_a;
      x["decoder_success_b"] = t.decoder_success_b;
      trials.push_back(std::move(x));
    }
  }
  j["per_trial"] = std::move(trials);
  return j;
}

inline Json to_json(const distill::FourPartyReport& r, bool per_trial = true) {
  Json j;
  j["protocol"] = r.protocol;
  j["n"] = r.n;
  j["delta"] = r.delta;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["mean_rate"] = r.mean_residual_rate;
  j["std"] = r.std_marginal_distance;
  j["upper_bound"] = r.mincut;
  j["abort_rate"] = 0.0;
  j["code_size"] = r.code_size;
  j["swapped"] = r.swapped;
  j["chi_a"] = r.chi_a;
  j["chi_b"] = r.chi_b;
  j["chi_ac"] = r.chi_ac;
  j["chi_bc"] = r.chi_bc;
  j["chi0"] = r.chi0;
  j["mean_marginal_distance"] = r.mean_marginal_distance;
  j["mean_code_average_distance"] = r.mean_code_average_distance;
  j["mean_entanglement_a"] = r.mean_entanglement_a;
  j["mean_entanglement_b"] = r.mean_entanglement_b;
  Json trials = Json::array();
  if (per_trial) {
    for (const auto& t : r.per_trial) {
      trials.push_back({{"trial", t.trial},
                        {"alpha", t.alpha},
                        {"alpha_probability", t.alpha_probability},
                        {"marginal_distance", t.marginal_distance},
                        {"code_average_distance", t.code_average_distance},
                        {"entanglement_a", t.entanglement_a},
                        {"entanglement_b", t.entanglement_b},
                        {"residual_rate", t.residual_rate}});
    }
  }
  j["per_trial"] = std::move(trials);
  return j;
}

inline Json to_json(const CapacityResult& r) {
  Json rho = Json::array();
  for (Eigen::Index i = 0; i < r.argmax.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < r.argmax.cols(); ++k) row.push_back({r.argmax(i, k).real(), r.argmax(i, k).imag()});
    rho.push_back(std::move(row));
  }
  return {{"capacity", r.capacity},
          {"upper_value", r.upper_value},
          {"input_entropy", r.input_entropy},
          {"output_entropy", r.output_entropy},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"argmax", std::move(rho)}};
}

inline Json to_json(const FitReport& r) {
  Json trace = Json::array();
  for (const auto& t : r.trace) trace.push_back({{"restart", t.restart}, {"distance_by_k", t.distance_by_k}});
  return {{"metric", r.metric},          {"n_copies", r.n_copies}, {"k_terms", r.k_terms},
          {"restarts", r.restarts},      {"seed", r.seed},         {"distance", r.distance},
          {"distance_by_k", r.distance_by_k}, {"weights", r.mixture.weights}, {"trace", std::move(trace)}};
}

inline Json to_json(const CodingDemoReport& r) {
  return {{"n", r.n},
          {"delta", r.delta},
          {"seed", r.seed},
          {"test_state", r.test_state},
          {"coherent_information", r.coherent_information},
          {"rate", r.rate},
          {"capacity", r.capacity},
          {"target", r.target},
          {"test_state_value", r.test_state_value},
          {"unassisted_average", r.unassisted_average},
          {"code_rate", r.code_rate},
          {"environment_dim", r.environment_dim},
          {"exact", r.exact}};
}

}  // namespace eoalab::report

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

// Command-line front end. run_cli parses the arguments, dispatches to the
// library, renders the report and maps errors to exit codes:
// 0 success, 2 validation or usage error, 3 resource cap, 1 anything else.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"  // vendored

#include "eoalab/eoalab.hpp"

namespace eoalab::cli {

using report::Json;

struct RunConfig {
  std::string state;
  std::string channel;
  PartySet a, b, helper, cut, parties;
  std::string c_label, d_label;
  std::size_t n = 4;
  double delta = 0.1;
  double eta = 0.2;
  std::size_t trials = 100;
  std::optional<std::uint64_t> seed;
  std::size_t restarts = 20;
  std::size_t max_iter = 200;
  std::size_t outputs_per_helper_dim = 2;
  std::size_t k_terms = 2;
  std::size_t n_copies = 1;
  std::optional<std::size_t> code_size;
  std::string basis = "computational";
  std::string measurement = "uniform";
  std::string proxy = "auto";
  std::string test_state = "capacity-optimal";
  std::string example;
  std::string format = "json";
  std::string output;
  std::size_t parallel = 1;
  bool analytic_check = false;
  bool summary_only = false;
  bool details = false;
  bool witness = false;
};

namespace detail {

inline constexpr const char* kBuiltinPrefix = "builtin:";

inline bool is_builtin(const std::string& s) { return s.rfind(kBuiltinPrefix, 0) == 0; }

inline PureState load_state(const std::string& s) {
  if (s.empty()) throw ValidationError("--state is required");
  if (is_builtin(s)) return builtin_state(s.substr(std::string(kBuiltinPrefix).size()));
  return io::read_state(s);
}

inline QuantumChannel load_channel(const std::string& s) {
  if (s.empty()) throw ValidationError("--channel is required");
  if (is_builtin(s)) return builtin_channel(s.substr(std::string(kBuiltinPrefix).size()));
  return io::read_channel(s);
}

inline const std::string& single(const PartySet& p, const char* flag) {
  if (p.size() != 1) throw ValidationError(std::string(flag) + " must name exactly one party");
  return p.front();
}

inline void require(const PartySet& p, const char* flag) {
  if (p.empty()) throw ValidationError(std::string(flag) + " is required");
}

/// The remaining party when a and b are given on a three-party state.
inline PartySet default_helper(const PureState& psi, const PartySet& a, const PartySet& b,
                               const PartySet& given) {
  if (!given.empty()) return given;
  PartySet used = a;
  used.insert(used.end(), b.begin(), b.end());
  const auto idx = psi.layout().indices_of(used);
  PartySet rest;
  for (auto i : psi.layout().complement(idx)) rest.push_back(psi.layout()[i].label);
  if (rest.empty()) throw ValidationError("--helper is required");
  return rest;
}

inline CMatrix helper_basis(const std::string& name, std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  if (name == "computational") return CMatrix::Identity(d, d);
  if (name == "fourier") return fourier_basis(dim);
  throw ValidationError("--basis must be 'computational' or 'fourier'");
}

inline std::size_t dim_of(const PureState& psi, const PartySet& p) {
  return psi.layout().dim_of(psi.layout().indices_of(p));
}

inline distill::ProtocolOptions protocol_options(const RunConfig& c) {
  distill::ProtocolOptions o;
  o.delta = c.delta;
  o.eta = c.eta;
  o.code_size = c.code_size;
  o.threads = c.parallel;
  o.analytic_check = c.analytic_check;
  if (c.measurement == "uniform") {
    o.measurement = distill::CodeMeasurement::kUniformCode;
  } else if (c.measurement == "complement") {
    o.measurement = distill::CodeMeasurement::kCompleteWithComplement;
  } else {
    throw ValidationError("--measurement must be 'uniform' or 'complement'");
  }
  return o;
}

inline distill::ProductSource product_source(const PureState& psi, const RunConfig& c) {
  require(c.a, "--a");
  require(c.b, "--b");
  const PartySet helper = default_helper(psi, c.a, c.b, c.helper);
  const std::string& h = single(helper, "--helper");
  return distill::ProductSource::from_state(psi, c.a, c.b, h, helper_basis(c.basis, dim_of(psi, helper)));
}

inline EoAOptions eoa_options(const RunConfig& c) {
  EoAOptions o;
  o.restarts = c.restarts;
  o.max_iter = c.max_iter;
  o.outputs_per_helper_dim = c.outputs_per_helper_dim;
  o.seed = c.seed.value_or(1);
  o.threads = c.parallel;
  return o;
}

// ---------------------------------------------------------------------------
// Paper examples

inline Json example_aharonov() {
  const PureState a = make_aharonov();
  const EoAReport r = eoa_optimize(a, {"A"}, {"B"}, {"C"});
  return {{"upper_bound", r.upper_bound},
          {"lower_bound", r.lower_bound},
          {"marginal_spectrum", spectrum(reduced_state(a, {"A"})).values}};
}

inline Json example_aharonov2() {
  const PureState phi = make_example1_phi();
  const PartySet left = {"A1", "A2"};
  return {{"schmidt", schmidt(phi, left).values}, {"entropy", entanglement_entropy(phi, left)}};
}

inline Json example_upsilon() {
  Json rows = Json::array();
  for (int i = 0; i <= 10; ++i) {
    const double a2 = 0.05 * i;
    const PureState u = make_upsilon(a2);
    const double ab = std::sqrt(a2 * (1.0 - a2));
    const OneWayBound bound = oneway_bc_ghz_bound(u, {"B"}, {"C"}, {"A"});
    const GhzEprRates helper_b = ghz_epr_rates(u, "B", ensemble_from_helper_basis(u, "B"));
    rows.push_back({{"alpha2", a2},
                    {"eof_bc", eof_2qubit(reduced_state(u, {"B", "C"}))},
                    {"closed_form_eof", binary_entropy(0.5 - ab)},
                    {"ghz_rate_helper_a", bound.value},
                    {"epr_rate_helper_a", bound.formation},
                    {"ghz_rate_helper_b", helper_b.ghz},
                    {"epr_rate_helper_b", helper_b.epr},
                    {"conjectured_ghz", binary_entropy(a2)},
                    {"conjectured_epr", 1.0 - binary_entropy(a2)}});
  }
  return {{"rows", std::move(rows)}};
}

inline Json example_wstate() {
  const PureState w = make_w();
  const double ub = eoa_upper_bound(w, {"A"}, {"B"});
  const double eof = eof_2qubit(reduced_state(w, {"A", "B"}));
  const OneWayBound bound = oneway_bc_ghz_bound(w, {"A"}, {"B"}, {"C"});
  return {{"upper_bound", ub},
          {"eof", eof},
          {"ghz_rate", bound.value},
          {"combined_ghz", ub - 0.5 * eof}};
}

inline Json example_ghz() {
  const PureState g = make_ghz(3);
  const GhzEprRates comp = ghz_epr_rates(g, "C", ensemble_from_helper_basis(g, "C"));
  const GhzEprRates plus = ghz_epr_rates(g, "C", ensemble_from_helper_basis(g, "C", fourier_basis(2)));
  return {{"upper_bound", eoa_upper_bound(g, {"A"}, {"B"})},
          {"ghz_rate_computational", comp.ghz},
          {"epr_rate_fourier", plus.epr},
          {"oneway_bound", oneway_bc_ghz_bound(g, {"A"}, {"B"}, {"C"}).value},
          {"mincut_ghz4", mincut_entanglement(make_ghz(4), "A", "B").value}};
}

inline Json example_lost_found() {
  auto cap = [](const QuantumChannel& t) { return env_assisted_capacity(t).capacity; };
  return {{"identity", cap(channels::identity(2))},
          {"identity_qutrit", cap(channels::identity(3))},
          {"depolarizing", cap(channels::depolarizing(1.0))},
          {"dephasing", cap(channels::dephasing(1.0))},
          {"amplitude_damping_0.5", cap(channels::amplitude_damping(0.5))},
          {"aharonov_choi", cap(channels::aharonov_choi())}};
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"eoalab: entanglement of assistance toolkit", "eoalab"};
  app.fallthrough();
  app.require_subcommand(1);
  bool json_flag = false, csv_flag = false, text_flag = false;
  app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_flag("--json", json_flag, "Shorthand for --format json");
  app.add_flag("--csv", csv_flag, "Shorthand for --format csv");
  app.add_flag("--text", text_flag, "Shorthand for --format text");
  app.add_option("--output,-o", c.output, "Write the report to this file");
  app.add_option("--parallel", c.parallel, "Worker threads for independent trials/restarts")
      ->check(CLI::PositiveNumber);

  auto state_opt = [&](CLI::App* s) {
    s->add_option("--state", c.state, "State file or builtin:<name>")->required();
  };
  auto ab_opts = [&](CLI::App* s) {
    s->add_option("--a", c.a, "Parties of side a (comma separated)")->delimiter(',')->required();
    s->add_option("--b", c.b, "Parties of side b (comma separated)")->delimiter(',')->required();
  };
  auto helper_opt = [&](CLI::App* s) {
    s->add_option("--helper", c.helper, "Helper parties (default: the rest)")->delimiter(',');
  };
  auto seed_opt = [&](CLI::App* s, bool required) {
    auto* o = s->add_option("--seed", c.seed, "Master seed");
    if (required) o->required();
  };
  auto protocol_opts = [&](CLI::App* s) {
    s->add_option("--n", c.n, "Copies")->check(CLI::PositiveNumber);
    s->add_option("--delta", c.delta, "Rate back-off");
    s->add_option("--trials", c.trials, "Trials")->check(CLI::PositiveNumber);
    s->add_option("--code-size", c.code_size, "Override the code size N");
    s->add_option("--basis", c.basis, "Helper basis: computational|fourier");
    s->add_flag("--summary-only", c.summary_only, "Omit per-trial records");
  };

  auto* entropy = app.add_subcommand("entropy", "Entropy of a marginal (or of every single party)");
  state_opt(entropy);
  entropy->add_option("--parties", c.parties, "Marginal (comma separated)")->delimiter(',');

  auto* schmidt_cmd = app.add_subcommand("schmidt", "Schmidt spectrum across a cut");
  state_opt(schmidt_cmd);
  schmidt_cmd->add_option("--cut", c.cut, "Parties on the left of the cut")->delimiter(',')->required();

  auto* bound = app.add_subcommand("eoa-bound", "min{S(a), S(b)}");
  state_opt(bound);
  ab_opts(bound);

  auto* opt_cmd = app.add_subcommand("eoa-opt", "Search helper measurements for the best ensemble");
  state_opt(opt_cmd);
  ab_opts(opt_cmd);
  helper_opt(opt_cmd);
  seed_opt(opt_cmd, true);
  opt_cmd->add_option("--restarts", c.restarts, "Random restarts")->check(CLI::PositiveNumber);
  opt_cmd->add_option("--max-iter", c.max_iter, "Sweeps per restart");
  opt_cmd->add_option("--k", c.outputs_per_helper_dim, "Outcomes per helper dimension")->check(CLI::PositiveNumber);
  opt_cmd->add_flag("--witness", c.witness, "Include the witness ensemble");

  auto* eof = app.add_subcommand("eof", "Concurrence and entanglement of formation of a two-qubit marginal");
  state_opt(eof);
  ab_opts(eof);

  auto* mincut = app.add_subcommand("mincut", "min over helper subsets S of S(a S)");
  state_opt(mincut);
  ab_opts(mincut);

  auto* rates = app.add_subcommand("rates", "GHZ/EPR rates for a helper basis and the one-way GHZ bound");
  state_opt(rates);
  ab_opts(rates);
  helper_opt(rates);
  seed_opt(rates, false);
  rates->add_option("--basis", c.basis, "Helper basis: computational|fourier");
  rates->add_option("--proxy", c.proxy, "Formation proxy: auto|wootters|optimizer");
  rates->add_option("--restarts", c.restarts, "Optimizer restarts for the proxy");

  auto* distill_cmd = app.add_subcommand("distill", "Run the EPR distillation protocol");
  state_opt(distill_cmd);
  ab_opts(distill_cmd);
  helper_opt(distill_cmd);
  seed_opt(distill_cmd, true);
  protocol_opts(distill_cmd);
  distill_cmd->add_option("--eta", c.eta, "Typicality window");
  distill_cmd->add_option("--measurement", c.measurement, "uniform|complement");
  distill_cmd->add_flag("--analytic-check", c.analytic_check, "Exact outcome average per trial");

  auto* ghz = app.add_subcommand("ghz", "Run the coherent GHZ + EPR protocol");
  state_opt(ghz);
  ab_opts(ghz);
  helper_opt(ghz);
  seed_opt(ghz, true);
  protocol_opts(ghz);
  ghz->add_option("--eta", c.eta, "Typicality window");

  auto* four = app.add_subcommand("four-party", "Disengage one helper of a four-party state");
  state_opt(four);
  four->add_option("--a", c.a, "Party a")->required();
  four->add_option("--b", c.b, "Party b")->required();
  four->add_option("--c", c.c_label, "Kept helper")->required();
  four->add_option("--d", c.d_label, "Measured helper")->required();
  seed_opt(four, true);
  protocol_opts(four);

  auto* capacity = app.add_subcommand("capacity", "Environment-assisted capacity");
  capacity->add_option("--channel", c.channel, "Channel file or builtin:<name>")->required();
  capacity->add_flag("--details", c.details, "Include the optimizer record");

  auto* fit = app.add_subcommand("fit-mixture", "Fit a mixture of unitaries to a channel");
  fit->add_option("--channel", c.channel, "Channel file or builtin:<name>")->required();
  fit->add_option("--n-copies", c.n_copies, "Copies of the channel")->check(CLI::PositiveNumber);
  fit->add_option("--k", c.k_terms, "Number of terms")->check(CLI::PositiveNumber);
  fit->add_option("--restarts", c.restarts, "Random restarts")->check(CLI::PositiveNumber);
  seed_opt(fit, true);

  auto* demo = app.add_subcommand("coding-demo", "Finite-n environment-assisted coding");
  demo->add_option("--channel", c.channel, "Channel file or builtin:<name>")->required();
  demo->add_option("--n", c.n, "Channel uses")->check(CLI::PositiveNumber);
  demo->add_option("--delta", c.delta, "Rate back-off");
  demo->add_option("--test-state", c.test_state, "capacity-optimal|max-entangled");
  seed_opt(demo, true);

  auto* example = app.add_subcommand("example", "Reproduce a worked example");
  example->add_option("name", c.example, "Example name")
      ->required()
      ->check(CLI::IsMember({"aharonov", "aharonov2", "upsilon", "wstate", "ghz", "lost-found"}));

  auto* catalog = app.add_subcommand("catalog", "List builtin states and channels");

  std::vector<std::string> argv_store = {"eoalab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return 2;
  }
  if (json_flag + csv_flag + text_flag > 1) {
    err << "error: choose at most one of --json, --csv, --text\n";
    return 2;
  }
  if (json_flag) c.format = "json";
  if (csv_flag) c.format = "csv";
  if (text_flag) c.format = "text";

  try {
    Json result;
    if (entropy->parsed()) {
      const PureState psi = detail::load_state(c.state);
      if (c.parties.empty()) {
        Json per;
        for (const auto& p : psi.layout().parties()) per[p.label] = marginal_entropy(psi, {p.label});
        result = {{"entropies", per}};
      } else {
        result = {{"entropy", marginal_entropy(psi, c.parties)}};
      }
    } else if (schmidt_cmd->parsed()) {
      const PureState psi = detail::load_state(c.state);
      result = {{"schmidt", schmidt(psi, c.cut).values}, {"entropy", entanglement_entropy(psi, c.cut)}};
    } else if (bound->parsed()) {
      const PureState psi = detail::load_state(c.state);
      result = {{"upper_bound", eoa_upper_bound(psi, c.a, c.b)}};
    } else if (opt_cmd->parsed()) {
      const PureState psi = detail::load_state(c.state);
      const PartySet helper = detail::default_helper(psi, c.a, c.b, c.helper);
      result = report::to_json(eoa_optimize(psi, c.a, c.b, helper, detail::eoa_options(c)), c.witness);
    } else if (eof->parsed()) {
      const PureState psi = detail::load_state(c.state);
      PartySet ab = c.a;
      ab.insert(ab.end(), c.b.begin(), c.b.end());
      const DensityOperator rho = reorder(reduced_state(psi, ab), ab);
      const double conc = concurrence(rho);
      result = {{"concurrence", conc}, {"eof", eof_from_concurrence(conc)}};
    } else if (mincut->parsed()) {
      const PureState psi = detail::load_state(c.state);
      const MinCut m = mincut_entanglement(psi, detail::single(c.a, "--a"), detail::single(c.b, "--b"));
      result = {{"value", m.value}, {"subset", m.subset}};
    } else if (rates->parsed()) {
      const PureState psi = detail::load_state(c.state);
      const PartySet helper = detail::default_helper(psi, c.a, c.b, c.helper);
      FormationProxy proxy = FormationProxy::kAuto;
      if (c.proxy == "wootters") {
        proxy = FormationProxy::kWootters;
      } else if (c.proxy == "optimizer") {
        proxy = FormationProxy::kOptimizer;
      } else if (c.proxy != "auto") {
        throw ValidationError("--proxy must be auto, wootters or optimizer");
      }
      const std::string& h = detail::single(helper, "--helper");
      const Ensemble e = ensemble_from_helper_basis(psi, h, detail::helper_basis(c.basis, detail::dim_of(psi, helper)));
      const GhzEprRates r = ghz_epr_rates(psi, c.a, c.b, helper, e);
      const bool qubits = detail::dim_of(psi, c.a) == 2 && detail::dim_of(psi, c.b) == 2 &&
                          c.a.size() == 1 && c.b.size() == 1;
      const bool uses_optimizer = proxy == FormationProxy::kOptimizer || (proxy == FormationProxy::kAuto && !qubits);
      if (uses_optimizer && !c.seed) throw ValidationError("--seed is required when the optimizer supplies E_F");
      const OneWayBound ob = oneway_bc_ghz_bound(psi, c.a, c.b, helper, proxy, detail::eoa_options(c));
      result = {{"chi", r.ghz},
                {"avg_entanglement", r.epr},
                {"min_marginal_entropy", r.min_marginal_entropy},
                {"oneway_bound", ob.value},
                {"formation", ob.formation},
                {"formation_is_upper_value", ob.formation_is_upper_value}};
    } else if (distill_cmd->parsed()) {
      const PureState psi = detail::load_state(c.state);
      const auto src = detail::product_source(psi, c);
      result = report::to_json(distill::run_eoa_protocol(src, c.n, c.trials, *c.seed, detail::protocol_options(c)),
                               !c.summary_only);
    } else if (ghz->parsed()) {
      const PureState psi = detail::load_state(c.state);
      const auto src = detail::product_source(psi, c);
      result = report::to_json(distill::run_ghz_protocol(src, c.n, c.trials, *c.seed, detail::protocol_options(c)),
                               !c.summary_only);
    } else if (four->parsed()) {
      const PureState psi = detail::load_state(c.state);
      distill::FourPartyOptions o;
      o.delta = c.delta;
      o.code_size = c.code_size;
      o.threads = c.parallel;
      o.helper_basis = detail::helper_basis(c.basis, detail::dim_of(psi, {c.d_label}));
      result = report::to_json(distill::disengage_fourth(psi, detail::single(c.a, "--a"), detail::single(c.b, "--b"),
                                                         c.c_label, c.d_label, c.n, c.trials, *c.seed, o),
                               !c.summary_only);
    } else if (capacity->parsed()) {
      const CapacityResult r = env_assisted_capacity(detail::load_channel(c.channel));
      result = c.details ? report::to_json(r) : Json{{"capacity", r.capacity}};
    } else if (fit->parsed()) {
      FitOptions o;
      o.threads = c.parallel;
      result = report::to_json(
          fit_unitary_mixture(detail::load_channel(c.channel), c.n_copies, c.k_terms, c.restarts, *c.seed, o));
    } else if (demo->parsed()) {
      CodingDemoOptions o;
      o.delta = c.delta;
      if (c.test_state == "max-entangled") {
        o.test_state = TestState::kMaxEntangled;
      } else if (c.test_state != "capacity-optimal") {
        throw ValidationError("--test-state must be capacity-optimal or max-entangled");
      }
      result = report::to_json(env_assisted_coding_demo(detail::load_channel(c.channel), c.n, *c.seed, o));
    } else if (example->parsed()) {
      if (c.example == "aharonov") result = detail::example_aharonov();
      if (c.example == "aharonov2") result = detail::example_aharonov2();
      if (c.example == "upsilon") result = detail::example_upsilon();
      if (c.example == "wstate") result = detail::example_wstate();
      if (c.example == "ghz") result = detail::example_ghz();
      if (c.example == "lost-found") result = detail::example_lost_found();
    } else if (catalog->parsed()) {
      Json list = Json::array();
      for (const auto& e : builtin_catalog()) {
        list.push_back({{"name", e.name}, {"kind", e.kind}, {"description", e.description}});
      }
      result = {{"builtins", std::move(list)}};
    }
    const auto fmt = c.format == "csv" ? report::Format::kCsv
                     : c.format == "text" ? report::Format::kText
                                          : report::Format::kJson;
    const std::string text = report::render(result, fmt);
    if (c.output.empty()) {
      out << text;
    } else {
      std::ofstream file(c.output, std::ios::binary);
      if (!file) throw ValidationError("cannot write " + c.output);
      file << text;
    }
    return 0;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceCapExceeded& e) {
    err << "resource cap exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace eoalab::cli

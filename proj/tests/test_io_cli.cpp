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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "eoalab/cli.hpp"
#include "json.hpp"

using namespace eoalab;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json json_of(const Run& r) { return nlohmann::json::parse(r.out); }

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("eoalab_test_" + name)).string();
}

}  // namespace

TEST(Io, FormatDoubleRoundTrips) {
  for (double v : {1.0, 0.1, 1.0 / 3.0, -2.5e-17, 6.02e23}) {
    EXPECT_EQ(std::stod(io::format_double(v)), v);
  }
  EXPECT_EQ(report::render(report::Json{{"x", 1.0}}, report::Format::kJson).find("1.0") != std::string::npos,
            true);
}

TEST(Io, StateRoundTrip) {
  const PureState w = builtin_state("upsilon:0.3");
  const PureState back = io::state_from_json(io::state_to_json(w));
  EXPECT_EQ(back.layout(), w.layout());
  EXPECT_EQ(back.amplitudes(), w.amplitudes());
}

TEST(Io, ChannelRoundTripAndNestedRows) {
  const QuantumChannel t = builtin_channel("amplitude-damping:0.3");
  const QuantumChannel back = io::channel_from_json(io::channel_to_json(t));
  ASSERT_EQ(back.kraus().size(), t.kraus().size());
  for (std::size_t k = 0; k < t.kraus().size(); ++k) EXPECT_EQ(back.kraus()[k], t.kraus()[k]);
  const std::string nested =
      R"({"d_in":2,"d_out":2,"kraus":[[[[1,0],[0,0]],[[0,0],[1,0]]]]})";
  EXPECT_NO_THROW(io::channel_from_json(nested));
}

TEST(Io, RejectsMalformedInput) {
  EXPECT_THROW(io::state_from_json("{"), ValidationError);
  EXPECT_THROW(io::state_from_json(R"({"parties":[{"label":"A","dim":2}],"amplitudes":[[1,0]]})"),
               ValidationError);
  EXPECT_THROW(io::read_state("/nonexistent/eoalab.json"), ValidationError);
}

TEST(Catalog, NamesResolve) {
  EXPECT_EQ(builtin_state("ghz:4").layout().size(), 4u);
  EXPECT_EQ(builtin_state("aharonov2").layout().size(), 6u);
  EXPECT_EQ(builtin_channel("aharonov-choi").d_in(), 3u);
  EXPECT_THROW(builtin_state("nope"), ValidationError);
  EXPECT_THROW(builtin_state("upsilon:0.9"), ValidationError);
}

TEST(Report, CsvAndJsonCarrySameNumbers) {
  const auto r = run({"example", "wstate"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto c = run({"--csv", "example", "wstate"});
  const auto j = json_of(r);
  for (const char* key : {"upper_bound", "eof", "ghz_rate", "combined_ghz"}) {
    const std::string needle = std::string(key) + "," + io::format_double(j[key].get<double>());
    EXPECT_NE(c.out.find(needle), std::string::npos) << needle;
  }
}

TEST(Cli, ExampleKeys) {
  const auto j = json_of(run({"example", "wstate"}));
  EXPECT_EQ(j.size(), 4u);
  EXPECT_NEAR(j["combined_ghz"].get<double>(), 0.64327, 1e-5);
  const auto a = json_of(run({"example", "aharonov2"}));
  EXPECT_NEAR(a["entropy"].get<double>(), 2.5, 1e-9);
  EXPECT_EQ(a["schmidt"].size(), 6u);
}

TEST(Cli, CapacityOutput) {
  const auto j = json_of(run({"capacity", "--channel", "builtin:identity"}));
  EXPECT_EQ(j.size(), 1u);
  EXPECT_NEAR(j["capacity"].get<double>(), 1.0, 1e-6);
  const auto d = json_of(run({"capacity", "--channel", "builtin:identity", "--details"}));
  EXPECT_TRUE(d.contains("upper_value"));
}

TEST(Cli, TextModeUsesFiveDecimals) {
  const auto r = run({"--text", "eoa-bound", "--state", "builtin:w", "--a", "A", "--b", "B"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("0.91830"), std::string::npos) << r.out;
}

TEST(Cli, StochasticCommandsNeedSeed) {
  const auto r = run({"distill", "--state", "builtin:w", "--a", "A", "--b", "B", "--n", "2"});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"entropy", "--state", "builtin:w", "--bogus"}).code, 2);
  EXPECT_EQ(run({"entropy", "--state", "builtin:nope"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, DistillIsByteIdentical) {
  const std::vector<std::string> args = {"distill", "--state", "builtin:w", "--a", "A", "--b", "B",
                                         "--n", "3", "--trials", "20", "--seed", "4"};
  const auto a = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  auto threaded = args;
  threaded.insert(threaded.begin(), {"--parallel", "2"});
  EXPECT_EQ(a.out, run(args).out);
  EXPECT_EQ(a.out, run(threaded).out);
  const auto j = json_of(a);
  for (const char* key : {"protocol", "n", "delta", "trials", "seed", "mean_rate", "std", "upper_bound",
                          "abort_rate", "per_trial"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

TEST(Cli, ResourceCapExitsThree) {
  ::setenv("EOALAB_MEM_CAP_MB", "1", 1);
  const auto r = run({"distill", "--state", "builtin:aharonov", "--a", "A", "--b", "B", "--n", "8",
                      "--trials", "1", "--seed", "1"});
  ::unsetenv("EOALAB_MEM_CAP_MB");
  EXPECT_EQ(r.code, 3) << r.err;
}

TEST(Cli, ReadsStateFilesAndWritesOutput) {
  const std::string in = temp_path("state.json");
  const std::string out = temp_path("out.json");
  io::write_state(in, make_w());
  const auto r = run({"-o", out, "entropy", "--state", in, "--parties", "A"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto j = nlohmann::json::parse(io::detail::read_file(out));
  EXPECT_FALSE(j.empty());
  std::filesystem::remove(in);
  std::filesystem::remove(out);
}

TEST(Cli, CatalogListsBuiltins) {
  const auto j = json_of(run({"catalog"}));
  EXPECT_EQ(j["builtins"].size(), builtin_catalog().size());
}

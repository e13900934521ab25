// Copyright 2026 The Approachlab Authors.
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <sstream>

#include "approachlab/experiments.h"
#include "approachlab/verify.h"
#include "doctest.h"

namespace approachlab {
namespace {

std::string Slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

TEST_CASE("config parsing") {
  const auto config = ParseExperimentConfig(
      R"({"suite": "blackwell", "n": 50, "trials": 3, "seed": 9,
          "out": "/tmp", "target": {"type": "singleton", "point": [0, 0, 0]}})");
  CHECK(config.suite == "blackwell");
  CHECK(config.n == 50);
  CHECK(config.trials == 3);
  CHECK(config.seed == 9);

  CHECK_THROWS_AS(ParseExperimentConfig(R"({"suite": "x", "bogus": 1})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(ParseExperimentConfig("not json"), std::invalid_argument);
  CHECK_THROWS_AS(ParseExperimentConfig(R"({"suite": "x", "trials": 0})"),
                  std::invalid_argument);
}

TEST_CASE("simulate is deterministic and writes the declared files") {
  ExperimentConfig config;
  config.suite = "regret-matching";
  config.n = 300;
  config.trials = 4;
  config.seed = 11;
  config.out = "/tmp";
  std::ostringstream log;
  CHECK(CmdSimulate(config, log) == 0);
  const std::string first = Slurp("/tmp/regret-matching_series.csv");
  const std::string summary = Slurp("/tmp/regret-matching_summary.json");
  CHECK(first.rfind("stage,mean,stddev,max\n", 0) == 0);
  CHECK(summary.find("\"bound_formula\": \"sqrt(A/n)\"") !=
        std::string::npos);

  CHECK(CmdSimulate(config, log) == 0);
  CHECK(Slurp("/tmp/regret-matching_series.csv") == first);

  std::remove("/tmp/regret-matching_series.csv");
  std::remove("/tmp/regret-matching_summary.json");
}

TEST_CASE("simulate with zero stages writes an empty series") {
  ExperimentConfig config;
  config.suite = "exp-weights";
  config.n = 0;
  config.trials = 1;
  config.out = "/tmp";
  std::ostringstream log;
  CHECK(CmdSimulate(config, log) == 0);
  CHECK(Slurp("/tmp/exp-weights_series.csv") == "stage,mean,stddev,max\n");
  std::remove("/tmp/exp-weights_series.csv");
  std::remove("/tmp/exp-weights_summary.json");
}

TEST_CASE("simulate covers the approachability suites") {
  ExperimentConfig config;
  config.suite = "blackwell";
  config.n = 400;
  config.trials = 3;
  config.out = "/tmp";
  std::ostringstream log;
  CHECK(CmdSimulate(config, log) == 0);
  std::remove("/tmp/blackwell_series.csv");
  std::remove("/tmp/blackwell_summary.json");

  config.suite = "grid-calibration";
  config.n = 300;
  CHECK(CmdSimulate(config, log) == 0);
  std::remove("/tmp/grid-calibration_series.csv");
  std::remove("/tmp/grid-calibration_summary.json");

  config.suite = "no-such-suite";
  CHECK_THROWS_AS(CmdSimulate(config, log), std::invalid_argument);
}

TEST_CASE("demos print their headline quantities") {
  std::ostringstream out;
  CHECK(CmdDemo("weak-approach", 100, 0.0, out) == 0);
  CHECK(out.str().find("terminal distance") != std::string::npos);

  std::ostringstream foster;
  CHECK(CmdDemo("foster", 2000, 0.05, foster) == 0);
  CHECK(foster.str().find("overshoot") != std::string::npos);

  CHECK_THROWS_AS(CmdDemo("nope", 0, 0.0, out), std::invalid_argument);
}

TEST_CASE("verify suite dispatch") {
  CHECK_THROWS_AS(RunVerifySuite("unknown"), std::invalid_argument);
  const auto results = RunVerifySuite("lln");
  REQUIRE(results.size() == 1);
  CHECK(results[0].pass);
}

}  // namespace
}  // namespace approachlab

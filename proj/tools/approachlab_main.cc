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

// Batch experiment runner: configure a game, strategy, adversary and target,
// run Monte-Carlo suites and emit CSV series plus bound-versus-empirical
// verification reports. APPROACHLAB_THREADS caps worker parallelism.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "approachlab/experiments.h"
#include "approachlab/verify.h"

int main(int argc, char** argv) {
  CLI::App app{"approachability, regret and calibration simulator"};
  app.require_subcommand(1);

  std::string config_path;
  long n_override = -1;
  int trials_override = -1;
  std::string seed_override;
  std::string out_override;
  CLI::App* simulate =
      app.add_subcommand("simulate", "run a configured Monte-Carlo suite");
  simulate->add_option("--config", config_path, "JSON experiment config")
      ->required();
  simulate->add_option("--n", n_override, "override the stage count");
  simulate->add_option("--trials", trials_override,
                       "override the trial count");
  simulate->add_option("--seed", seed_override, "override the base seed");
  simulate->add_option("--out", out_override, "override the output directory");

  std::string suite = "all";
  CLI::App* verify = app.add_subcommand(
      "verify", "run a bound-verification suite and report pass/fail");
  verify->add_option(
      "suite", suite,
      "one of lln, approach-rates, regret-rates, calibration-rates, "
      "equilibria, oracles, all");

  std::string demo_name;
  long demo_n = 0;
  double demo_eps = 0.0;
  CLI::App* demo = app.add_subcommand("demo", "run a named demonstration");
  demo->add_option("name", demo_name,
                   "one of weak-approach, oakes-dawid, foster")
      ->required();
  demo->add_option("--n", demo_n, "stage or phase count");
  demo->add_option("--eps", demo_eps, "forecaster resolution");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      approachlab::ExperimentConfig config =
          approachlab::LoadExperimentConfig(config_path);
      if (n_override >= 0) config.n = n_override;
      if (trials_override >= 0) config.trials = trials_override;
      if (!seed_override.empty()) config.seed = std::stoull(seed_override);
      if (!out_override.empty()) config.out = out_override;
      return approachlab::CmdSimulate(config, std::cout);
    }
    if (verify->parsed()) {
      const auto results = approachlab::RunVerifySuite(suite);
      return approachlab::ReportResults(results, std::cout) ? 0 : 2;
    }
    if (demo->parsed()) {
      return approachlab::CmdDemo(demo_name, demo_n, demo_eps, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

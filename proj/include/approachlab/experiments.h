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

#ifndef APPROACHLAB_EXPERIMENTS_H_
#define APPROACHLAB_EXPERIMENTS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace approachlab {

// A batch experiment: which suite to run, what to run it on and where to
// write the results. Parsed from a single JSON document; unknown keys are
// rejected. Omitted sections fall back to the suite's documented defaults.
struct ExperimentConfig {
  std::string suite;
  std::string game_json;    // raw JSON of the game section ("" = default)
  std::string player_json;  // parameters of the player algorithm
  std::string nature_json;
  std::string target_json;
  long n = 1000;
  int trials = 20;
  std::uint64_t seed = 1;
  std::string out = ".";
};

ExperimentConfig ParseExperimentConfig(const std::string& json_text);
ExperimentConfig LoadExperimentConfig(const std::string& path);

// Runs the configured suite, writes <out>/<suite>_series.csv (per-stage
// mean/stddev/max of the suite metric over trials) and
// <out>/<suite>_summary.json (final metric, theoretical bound, pass flag).
// Returns 0 on success, 2 when the empirical mean violates the bound.
int CmdSimulate(const ExperimentConfig& config, std::ostream& log);

// Named demonstrations printing their headline quantity. `n` is the phase
// length for weak-approach and the stage count otherwise; `eps` is the
// forecaster resolution where applicable.
int CmdDemo(const std::string& name, long n, double eps, std::ostream& out);

}  // namespace approachlab

#endif  // APPROACHLAB_EXPERIMENTS_H_

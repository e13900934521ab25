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

#include "approachlab/experiments.h"

#include <cmath>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "approachlab/approach.h"
#include "approachlab/calibration.h"
#include "approachlab/engine.h"
#include "approachlab/regret.h"
#include "approachlab/zerosum.h"
#include "json.hpp"

namespace approachlab {
namespace {

using nlohmann::json;

void RejectUnknownKeys(const json& object,
                       const std::vector<std::string>& known,
                       const std::string& where) {
  for (auto it = object.begin(); it != object.end(); ++it) {
    bool ok = false;
    for (const std::string& key : known) {
      if (it.key() == key) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw std::invalid_argument("unknown key '" + it.key() + "' in " +
                                  where);
    }
  }
}

json ParseSection(const std::string& text, const std::string& where) {
  if (text.empty()) return json::object();
  json parsed = json::parse(text, nullptr, false);
  if (parsed.is_discarded()) {
    throw std::invalid_argument("invalid JSON in " + where);
  }
  return parsed;
}

ScalarGame DefaultScalarGame() {
  return ScalarGame{{{1.0, 0.0, 0.5}, {0.0, 1.0, 0.5}, {0.5, 0.5, 0.0}}};
}

ScalarGame ScalarGameFromJson(const json& section) {
  if (section.empty()) return DefaultScalarGame();
  RejectUnknownKeys(section, {"payoffs", "file"}, "game");
  if (section.contains("file")) {
    std::ifstream in(section["file"].get<std::string>());
    if (!in) {
      throw std::invalid_argument("cannot open game file " +
                                  section["file"].get<std::string>());
    }
    json from_file;
    in >> from_file;
    return ScalarGameFromJson(from_file);
  }
  ScalarGame game;
  for (const auto& row : section.at("payoffs")) {
    game.rho.push_back(row.get<Vec>());
  }
  CheckScalarGame(game);
  return game;
}

VectorGame VectorGameFromJson(const json& section) {
  if (!section.empty() && section.contains("tensor")) {
    RejectUnknownKeys(section, {"tensor"}, "game");
    std::vector<std::vector<Vec>> tensor;
    for (const auto& row : section["tensor"]) {
      std::vector<Vec> cells;
      for (const auto& cell : row) cells.push_back(cell.get<Vec>());
      tensor.push_back(std::move(cells));
    }
    return VectorGame::FromTensor(std::move(tensor));
  }
  // Default: the regret vector game of the scalar game section.
  const ScalarGame rho = ScalarGameFromJson(section);
  std::vector<Vec> payoffs;
  for (int a = 0; a < rho.rows(); ++a) {
    for (int b = 0; b < rho.cols(); ++b) {
      Vec r(rho.rows());
      for (int k = 0; k < rho.rows(); ++k) {
        r[k] = rho.rho[k][b] - rho.rho[a][b];
      }
      payoffs.push_back(std::move(r));
    }
  }
  return VectorGame(rho.rows(), rho.cols(), rho.rows(), std::move(payoffs));
}

std::unique_ptr<NatureStrategy> NatureFromJson(const json& section,
                                               const ScalarGame& rho) {
  if (section.empty()) {
    return std::make_unique<IidNature>(UniformAction(rho.cols()));
  }
  RejectUnknownKeys(section, {"type", "law", "action", "actions"}, "nature");
  const std::string type = section.at("type").get<std::string>();
  if (type == "iid") {
    MixedAction law = section.contains("law")
                          ? section["law"].get<Vec>()
                          : UniformAction(rho.cols());
    CheckMixedAction(law, "nature law");
    return std::make_unique<IidNature>(std::move(law));
  }
  if (type == "fixed") {
    return std::make_unique<FixedNature>(section.at("action").get<int>());
  }
  if (type == "cycle") {
    return std::make_unique<CyclingNature>(
        section.at("actions").get<std::vector<int>>());
  }
  if (type == "best-response") {
    return std::make_unique<BestResponseNature>(rho);
  }
  throw std::invalid_argument("unknown nature type: " + type);
}

ConvexTarget TargetFromJson(const json& section, int dim) {
  if (section.empty()) return ConvexTarget::NegativeOrthant(dim);
  RejectUnknownKeys(section,
                    {"type", "signs", "lower", "upper", "center", "radius",
                     "point"},
                    "target");
  const std::string type = section.at("type").get<std::string>();
  if (type == "orthant") {
    return ConvexTarget::Orthant(section.at("signs").get<std::vector<int>>());
  }
  if (type == "box") {
    return ConvexTarget::Box(section.at("lower").get<Vec>(),
                             section.at("upper").get<Vec>());
  }
  if (type == "ball") {
    return ConvexTarget::Ball(section.at("center").get<Vec>(),
                              section.at("radius").get<double>());
  }
  if (type == "singleton") {
    return ConvexTarget::Singleton(section.at("point").get<Vec>());
  }
  throw std::invalid_argument("unknown target type: " + type);
}

struct SuiteRun {
  std::vector<double> series_mean;
  std::vector<double> series_stddev;
  std::vector<double> series_max;
  double bound = 0.0;
  std::string bound_formula;
};

std::vector<double> RegretSeries(const ScalarGame& rho, Strategy* player,
                                 NatureStrategy* nature, long n,
                                 std::uint64_t seed, bool sup_norm,
                                 bool pairwise) {
  std::vector<Vec> payoffs;
  for (int a = 0; a < rho.rows(); ++a) {
    for (int b = 0; b < rho.cols(); ++b) payoffs.push_back({rho.rho[a][b]});
  }
  const VectorGame game(rho.rows(), rho.cols(), 1, std::move(payoffs));
  const Transcript t = RunEpisode(game, player, nature, n, seed);
  RegretState state(rho.rows());
  std::vector<double> out;
  out.reserve(n);
  for (long m = 0; m < n; ++m) {
    const StageRecord& rec = t.stages[m];
    Vec outcomes(rho.rows());
    for (int a = 0; a < rho.rows(); ++a) {
      outcomes[a] = rho.rho[a][rec.nature_action];
    }
    UpdateRegret(&state, rec.player_action, outcomes);
    if (pairwise) {
      double sq = 0.0;
      for (const Vec& row : state.PairwiseAverage()) {
        for (double v : row) sq += std::max(v, 0.0) * std::max(v, 0.0);
      }
      out.push_back(std::sqrt(sq));
    } else if (sup_norm) {
      out.push_back(NormInf(PositivePart(state.ExternalAverage())));
    } else {
      out.push_back(Norm2(PositivePart(state.ExternalAverage())));
    }
  }
  return out;
}

SuiteRun RunSuite(const ExperimentConfig& config) {
  const json game_section = ParseSection(config.game_json, "game");
  const json nature_section = ParseSection(config.nature_json, "nature");
  const json target_section = ParseSection(config.target_json, "target");
  const json player_section = ParseSection(config.player_json, "player");

  SuiteRun run;
  std::function<std::vector<double>(std::uint64_t)> trial;

  if (config.suite == "regret-matching" || config.suite == "exp-weights" ||
      config.suite == "internal") {
    RejectUnknownKeys(player_section, {}, "player");
    const ScalarGame rho = ScalarGameFromJson(game_section);
    trial = [=](std::uint64_t seed) {
      std::unique_ptr<Strategy> player;
      if (config.suite == "regret-matching") {
        player = std::make_unique<RegretMatchingStrategy>(rho);
      } else if (config.suite == "exp-weights") {
        player = std::make_unique<ExpWeightsStrategy>(rho);
      } else {
        player = std::make_unique<InternalRegretStrategy>(rho);
      }
      auto nature = NatureFromJson(nature_section, rho);
      return RegretSeries(rho, player.get(), nature.get(), config.n, seed,
                          config.suite == "exp-weights",
                          config.suite == "internal");
    };
    const double a_count = rho.rows();
    if (config.suite == "exp-weights") {
      run.bound = config.n > 0 ? 2.0 * std::sqrt(std::log(a_count) / config.n)
                               : 0.0;
      run.bound_formula = "2*sqrt(log(A)/n)";
    } else {
      run.bound = config.n > 0 ? std::sqrt(a_count / config.n) : 0.0;
      run.bound_formula = "sqrt(A/n)";
    }
  } else if (config.suite == "blackwell") {
    const VectorGame game = VectorGameFromJson(game_section);
    const ConvexTarget target = TargetFromJson(target_section, game.dim());
    RejectUnknownKeys(player_section, {"restrict_to_hull"}, "player");
    ApproachConfig approach(game, target);
    if (player_section.contains("restrict_to_hull")) {
      approach.restrict_to_hull = player_section["restrict_to_hull"];
    }
    const double kappa = Kappa(approach);
    const ScalarGame proxy{Matrix(game.A(), Vec(game.B(), 0.0))};
    trial = [=](std::uint64_t seed) {
      BlackwellStrategy player(approach);
      auto nature = NatureFromJson(nature_section, proxy);
      const Transcript t =
          RunEpisode(game, &player, nature.get(), config.n, seed);
      return MetricSeries(game, t, target, Averaging::kCesaro);
    };
    run.bound = config.n > 0 ? std::sqrt(kappa / config.n) : 0.0;
    run.bound_formula = "sqrt(kappa/n)";
  } else if (config.suite == "potential-linf") {
    const VectorGame game = VectorGameFromJson(game_section);
    const ConvexTarget target = TargetFromJson(target_section, game.dim());
    RejectUnknownKeys(player_section, {}, "player");
    const ScalarGame proxy{Matrix(game.A(), Vec(game.B(), 0.0))};
    trial = [=](std::uint64_t seed) {
      PotentialLinfStrategy player(game, target);
      auto nature = NatureFromJson(nature_section, proxy);
      const Transcript t =
          RunEpisode(game, &player, nature.get(), config.n, seed);
      std::vector<double> out;
      Vec sum(game.dim(), 0.0);
      for (long m = 1; m <= config.n; ++m) {
        Axpy(1.0, t.stages[m - 1].payoff, &sum);
        out.push_back(LinfDistance(target, Scale(sum, 1.0 / m)));
      }
      return out;
    };
    run.bound = config.n > 0
                    ? 14.0 * std::sqrt(std::log(2.0 * game.dim()) / config.n)
                    : 0.0;
    run.bound_formula = "14*sqrt(log(2d)/n)";
  } else if (config.suite == "grid-calibration") {
    RejectUnknownKeys(player_section, {"eps"}, "player");
    const double eps = player_section.contains("eps")
                           ? player_section["eps"].get<double>()
                           : 0.125;
    const Grid grid = MakeRegularGrid(1, eps);
    trial = [=](std::uint64_t seed) {
      GridForecaster forecaster(grid);
      OakesDawidAdversary adversary;
      Rng rng(seed);
      CalibTranscript t(2, grid.size());
      std::vector<double> out;
      for (long m = 0; m < config.n; ++m) {
        const MixedAction dist = forecaster.NextCellDistribution();
        const int outcome = adversary.Outcome(dist, grid, t, &rng);
        const int cell = rng.Categorical(dist);
        forecaster.Observe(cell, OutcomeReduced(outcome, 2));
        t.Record(cell, outcome);
        out.push_back(WeightedCalibScore(t, grid));
      }
      return out;
    };
    run.bound =
        config.n > 0
            ? 6.0 * std::sqrt(std::log(static_cast<double>(grid.size())) /
                              config.n)
            : 0.0;
    run.bound_formula = "6*sqrt(log(L)/n)";
  } else {
    throw std::invalid_argument("unknown suite: " + config.suite);
  }

  if (config.n == 0) {
    run.series_mean.clear();
    return run;
  }
  const MonteCarloResult mc =
      MonteCarlo(config.trials, config.seed, config.n, trial);
  run.series_mean = mc.mean;
  run.series_stddev = mc.stddev;
  run.series_max = mc.max;
  return run;
}

}  // namespace

ExperimentConfig ParseExperimentConfig(const std::string& json_text) {
  json parsed = json::parse(json_text, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw std::invalid_argument("config is not a JSON object");
  }
  RejectUnknownKeys(
      parsed,
      {"suite", "game", "player", "nature", "target", "n", "trials", "seed",
       "out"},
      "config");
  ExperimentConfig config;
  config.suite = parsed.at("suite").get<std::string>();
  if (parsed.contains("game")) config.game_json = parsed["game"].dump();
  if (parsed.contains("player")) config.player_json = parsed["player"].dump();
  if (parsed.contains("nature")) config.nature_json = parsed["nature"].dump();
  if (parsed.contains("target")) config.target_json = parsed["target"].dump();
  if (parsed.contains("n")) config.n = parsed["n"].get<long>();
  if (parsed.contains("trials")) config.trials = parsed["trials"].get<int>();
  if (parsed.contains("seed")) {
    config.seed = parsed["seed"].get<std::uint64_t>();
  }
  if (parsed.contains("out")) config.out = parsed["out"].get<std::string>();
  if (config.n < 0) throw std::invalid_argument("n must be >= 0");
  if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
  return config;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseExperimentConfig(buffer.str());
}

int CmdSimulate(const ExperimentConfig& config, std::ostream& log) {
  const SuiteRun run = RunSuite(config);

  const std::string csv_path = config.out + "/" + config.suite + "_series.csv";
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot open " + csv_path);
  csv << "stage,mean,stddev,max\n";
  csv.precision(17);
  for (std::size_t m = 0; m < run.series_mean.size(); ++m) {
    csv << (m + 1) << ',' << run.series_mean[m] << ',' << run.series_stddev[m]
        << ',' << run.series_max[m] << '\n';
  }
  csv.close();

  const double final_metric =
      run.series_mean.empty() ? 0.0 : run.series_mean.back();
  const bool pass = run.series_mean.empty() || final_metric <= run.bound;

  json summary;
  summary["suite"] = config.suite;
  summary["n"] = config.n;
  summary["trials"] = config.trials;
  summary["seed"] = config.seed;
  summary["final_metric"] = final_metric;
  if (run.series_mean.empty()) {
    summary["bound"] = nullptr;
  } else {
    summary["bound"] = run.bound;
  }
  summary["bound_formula"] = run.bound_formula;
  summary["pass"] = pass;
  const std::string json_path =
      config.out + "/" + config.suite + "_summary.json";
  std::ofstream js(json_path);
  if (!js) throw std::runtime_error("cannot open " + json_path);
  js << summary.dump(2) << '\n';
  js.close();

  log << "suite " << config.suite << ": final metric " << final_metric
      << ", bound " << run.bound << " (" << run.bound_formula << "), "
      << (pass ? "pass" : "bound violated") << "\n";
  log << "wrote " << csv_path << " and " << json_path << "\n";
  return pass ? 0 : 2;
}

int CmdDemo(const std::string& name, long n, double eps, std::ostream& out) {
  if (name == "weak-approach") {
    const long phase = n > 0 ? n : 100;
    double worst = 0.0;
    FixedNature left(0), right(1);
    IidNature coin(MixedAction{0.5, 0.5});
    CyclingNature alternating({0, 1});
    std::vector<NatureStrategy*> natures = {&left, &right, &coin,
                                            &alternating};
    for (NatureStrategy* nature : natures) {
      const auto result = WeakApproachDemo(phase, nature, 7);
      worst = std::max(worst, result.distance);
    }
    out << "terminal distance after 2N stages (N=" << phase
        << ", worst of 4 Natures): " << worst << " (bound " << 1.0 / phase
        << ")\n";
    return 0;
  }
  if (name == "oakes-dawid") {
    const long stages = n > 0 ? n : 10000;
    const double resolution = eps > 0.0 ? eps : 0.1;
    const Grid grid = MakeRegularGrid(1, resolution);
    FrequencyForecaster forecaster(grid);
    OakesDawidAdversary adversary;
    const CalibTranscript t =
        RunCalibration(&forecaster, &adversary, grid, 2, stages, 1);
    out << "eps-calibration score of the deterministic frequency forecaster "
           "after "
        << stages << " stages: " << EpsCalibrationScore(t, grid, resolution)
        << " (stays above 0.05)\n";
    return 0;
  }
  if (name == "foster") {
    const long stages = n > 0 ? n : 10000;
    const double resolution = eps > 0.0 ? eps : 0.05;
    FosterForecaster forecaster(resolution);
    Rng rng(1);
    for (long m = 0; m < stages; ++m) {
      const MixedAction dist = forecaster.NextCellDistribution();
      double mean_forecast = 0.0;
      for (int l = 0; l < forecaster.state().num_cells(); ++l) {
        mean_forecast += dist[l] * forecaster.state().grid[l];
      }
      const int outcome = OakesDawidNext(mean_forecast);
      const int cell = rng.Categorical(dist);
      forecaster.Observe(cell, OutcomeReduced(outcome, 2));
    }
    double max_overshoot = 0.0, max_shortfall = 0.0;
    for (int l = 0; l < forecaster.state().num_cells(); ++l) {
      max_overshoot =
          std::max(max_overshoot, std::abs(forecaster.state().Overshoot(l)));
      max_shortfall =
          std::max(max_shortfall, std::abs(forecaster.state().Shortfall(l)));
    }
    out << "foster forecaster after " << stages << " stages (eps "
        << resolution << "): max |overshoot| " << max_overshoot
        << ", max |shortfall| " << max_shortfall << "\n";
    return 0;
  }
  throw std::invalid_argument("unknown demo: " + name);
}

}  // namespace approachlab

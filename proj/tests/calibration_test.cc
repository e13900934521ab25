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
#include <fstream>
#include <random>

#include "approachlab/calibration.h"
#include "doctest.h"
#include "test_util.h"

namespace approachlab {
namespace {

double GridScalar(const Grid& grid, int cell) {
  return grid.reduced_points[cell][0];
}

int FindCell(const Grid& grid, double value) {
  for (int l = 0; l < grid.size(); ++l) {
    if (std::abs(GridScalar(grid, l) - value) <= 1e-9) return l;
  }
  REQUIRE(false);
  return -1;
}

TEST_CASE("regular grid construction") {
  const Grid grid = MakeRegularGrid(1, 0.25);
  REQUIRE(grid.size() == 3);
  CHECK(GridScalar(grid, 0) == doctest::Approx(0.0));
  CHECK(GridScalar(grid, 1) == doctest::Approx(0.5));
  CHECK(GridScalar(grid, 2) == doctest::Approx(1.0));
  CHECK(grid.step == doctest::Approx(0.5));

  // Pairwise distinct, inside the simplex.
  const Grid grid2 = MakeRegularGrid(2, 0.2);
  for (int i = 0; i < grid2.size(); ++i) {
    double sum = 0.0;
    for (double q : grid2.reduced_points[i]) {
      CHECK(q >= -1e-12);
      sum += q;
    }
    CHECK(sum <= 1.0 + 1e-9);
    for (int j = i + 1; j < grid2.size(); ++j) {
      CHECK(Dist2(grid2.reduced_points[i], grid2.reduced_points[j]) > 1e-9);
    }
  }
}

TEST_CASE("regular grid covers the simplex") {
  std::mt19937 gen(3);
  for (const double eps : {0.3, 0.2, 0.1}) {
    for (const int d : {1, 2, 3}) {
      const Grid grid = MakeRegularGrid(d, eps);
      for (int trial = 0; trial < 1000; ++trial) {
        const Vec q = FullToReduced(test::RandomMixed(gen, d + 1));
        double best = std::numeric_limits<double>::infinity();
        for (const Vec& p : grid.reduced_points) {
          best = std::min(best, Dist2(p, q));
        }
        CHECK(best <= eps + 1e-9);
      }
    }
  }
}

TEST_CASE("grid neighbors") {
  const Grid grid = MakeRegularGrid(2, 0.25);
  const auto neighbors = GridNeighbors(grid);
  // An interior point of a 2-d lattice has 4 neighbors.
  bool found_interior = false;
  for (int l = 0; l < grid.size(); ++l) {
    if (neighbors[l].size() == 4) found_interior = true;
  }
  CHECK(found_interior);

  Grid irregular;
  irregular.points = {{0.5, 0.5}};
  CHECK_THROWS_AS(GridNeighbors(irregular), std::invalid_argument);
}

TEST_CASE("calibration scores") {
  const Grid grid = MakeRegularGrid(1, 0.25);  // {0, 0.5, 1}

  // Predict 1/2 on alternating outcomes: perfectly calibrated.
  CalibTranscript t(2, grid.size());
  const int mid = FindCell(grid, 0.5);
  for (int m = 0; m < 100; ++m) t.Record(mid, m % 2);
  CHECK(CalibScore(t, grid) == doctest::Approx(0.0));

  // Predict 0 on constant 1 outcomes: score 1 (the average outcome sits on
  // the opposite grid point).
  CalibTranscript t2(2, grid.size());
  const int zero = FindCell(grid, 0.0);
  for (int m = 0; m < 50; ++m) t2.Record(zero, 1);
  CHECK(CalibScore(t2, grid) == doctest::Approx(1.0));

  // Weighted score with the first cell subsidized.
  Grid weighted = MakeRegularGrid(1, 0.5);  // {0, 1}
  weighted.weights = {1.0, 0.0};
  CalibTranscript t3(2, weighted.size());
  for (int m = 0; m < 50; ++m) t3.Record(0, 1);
  CHECK(WeightedCalibScore(t3, weighted) == doctest::Approx(0.0));

  CalibTranscript bad(2, 5);
  CHECK_THROWS_AS(CalibScore(bad, grid), std::invalid_argument);
  CHECK_THROWS_AS(t3.Record(7, 0), std::invalid_argument);
}

TEST_CASE("score expansion identity") {
  // Averaging the per-stage squared-norm differences over a cell equals the
  // difference of squared norms at the cell average.
  std::mt19937 gen(5);
  const Grid grid = MakeRegularGrid(2, 0.3);
  CalibTranscript t(3, grid.size());
  std::uniform_int_distribution<int> cell_dist(0, grid.size() - 1);
  std::uniform_int_distribution<int> outcome_dist(0, 2);
  std::vector<std::vector<int>> per_cell(grid.size());
  for (int m = 0; m < 400; ++m) {
    const int cell = cell_dist(gen);
    const int outcome = outcome_dist(gen);
    t.Record(cell, outcome);
    per_cell[cell].push_back(outcome);
  }
  for (int l = 0; l < grid.size(); ++l) {
    if (per_cell[l].empty()) continue;
    const Vec avg = t.CellAverage(l);
    for (int k = 0; k < grid.size(); ++k) {
      double direct = 0.0;
      for (int outcome : per_cell[l]) {
        const Vec w = OutcomeReduced(outcome, 3);
        direct += Norm2Sq(Sub(w, grid.reduced_points[l])) -
                  Norm2Sq(Sub(w, grid.reduced_points[k]));
      }
      direct /= per_cell[l].size();
      const double via_average = Norm2Sq(Sub(avg, grid.reduced_points[l])) -
                                 Norm2Sq(Sub(avg, grid.reduced_points[k]));
      CHECK(direct == doctest::Approx(via_average).epsilon(1e-9));
    }
  }
}

TEST_CASE("grid forecaster step from transcript counters") {
  const Grid grid = MakeRegularGrid(1, 0.25);

  // Empty transcript: uniform.
  CalibTranscript empty(2, grid.size());
  const MixedAction uniform = GridForecasterStep(empty, grid);
  for (double e : uniform) CHECK(e == doctest::Approx(1.0 / 3.0));

  // One stage, predicted 0, outcome 1: all mass flows out of cell 0.
  CalibTranscript one(2, grid.size());
  one.Record(FindCell(grid, 0.0), 1);
  const MixedAction after = GridForecasterStep(one, grid);
  CHECK(after[FindCell(grid, 0.0)] <= 1e-6);

  // Incremental forecaster agrees with the counter rebuild.
  std::mt19937 gen(7);
  GridForecaster forecaster(grid);
  CalibTranscript t(2, grid.size());
  std::uniform_int_distribution<int> cell_dist(0, grid.size() - 1);
  std::uniform_int_distribution<int> outcome_dist(0, 1);
  for (int m = 0; m < 60; ++m) {
    const int cell = cell_dist(gen);
    const int outcome = outcome_dist(gen);
    forecaster.Observe(cell, OutcomeReduced(outcome, 2));
    t.Record(cell, outcome);
  }
  const MixedAction incremental = forecaster.NextCellDistribution();
  const MixedAction rebuilt = GridForecasterStep(t, grid);
  for (int l = 0; l < grid.size(); ++l) {
    CHECK(incremental[l] == doctest::Approx(rebuilt[l]).epsilon(1e-6));
  }
}

TEST_CASE("neighborhood forecaster") {
  const Grid grid = MakeRegularGrid(1, 0.25);
  NeighborhoodForecaster forecaster(grid);
  const MixedAction uniform = forecaster.NextCellDistribution();
  for (double e : uniform) CHECK(e == doctest::Approx(1.0 / 3.0));

  // All regret mass on the pair 0 -> 0.5 drains cell 0.
  CalibTranscript t(2, grid.size());
  t.Record(FindCell(grid, 0.0), 1);
  const MixedAction lambda = NeighborhoodForecasterStep(t, grid);
  CHECK(lambda[FindCell(grid, 0.0)] <= 1e-6);
}

TEST_CASE("foster state and step") {
  FosterState state(0.05);
  CHECK(state.num_cells() == 10);
  CHECK(state.grid[0] == doctest::Approx(0.05));
  CHECK(state.grid[9] == doctest::Approx(0.95));

  // All-zero state: the first boundary cell has theta zero and is predicted.
  const FosterStep step = FosterForecastStep(state);
  CHECK(step.distribution[0] == doctest::Approx(1.0));

  // A crossing with overshoot 0.2 at cell l*-1 and shortfall 0.3 at l*:
  // mixing kills the drift, so the upper cell gets weight proportional to
  // the lower cell's overshoot.
  FosterState crossing(0.25);  // cells at 0.25 and 0.75
  REQUIRE(crossing.num_cells() == 2);
  crossing.stage = 10;
  crossing.overshoot_sums = {0.2 * 10, 0.0};
  crossing.shortfall_sums = {-1.0, 0.3 * 10};
  const FosterStep mixed = FosterForecastStep(crossing);
  CHECK(mixed.distribution[1] == doctest::Approx(0.2 / 0.5));
  CHECK(mixed.distribution[0] == doctest::Approx(0.3 / 0.5));

  // Expected drift of both tracked scores vanishes under this mixture for
  // every conditional outcome probability.
  for (double outcome_rate : {0.0, 0.3, 1.0}) {
    const double upper_edge = 0.25 + 0.25;  // cell 0 center + eps
    const double drift_e0 =
        mixed.distribution[0] * (outcome_rate - upper_edge);
    const double lower_edge = 0.75 - 0.25;
    const double drift_d1 =
        mixed.distribution[1] * (lower_edge - outcome_rate);
    CHECK(crossing.Overshoot(0) * drift_e0 +
              crossing.Shortfall(1) * drift_d1 ==
          doctest::Approx(0.0).epsilon(1e-12));
  }

  // Invariant violation is an internal error.
  FosterState broken(0.25);
  broken.stage = 4;
  broken.overshoot_sums = {1.0, 0.0};
  broken.shortfall_sums = {1.0, 0.0};
  CHECK_THROWS_AS(FosterForecastStep(broken), std::runtime_error);
}

TEST_CASE("foster bisection probe count") {
  // 8 cells: eps = 1/16.
  FosterState state(1.0 / 16.0);
  REQUIRE(state.num_cells() == 8);
  std::mt19937 gen(9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Rng rng(11);
  for (int m = 0; m < 3000; ++m) {
    const FosterStep step = FosterForecastStep(state);
    CHECK(step.probes <= 4);  // ceil(log2(8)) + 1
    const int cell = rng.Categorical(step.distribution);
    state.Record(cell, unit(gen) < 0.37 ? 1 : 0);
  }
}

TEST_CASE("foster drives both scores to zero against adversaries") {
  // The empirical check behind freezing the sign and mixing conventions.
  const double eps = 0.05;
  for (int mode = 0; mode < 3; ++mode) {
    FosterForecaster forecaster(eps);
    Rng rng(mode + 1);
    std::mt19937 gen(mode + 31);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int m = 0; m < 10000; ++m) {
      const MixedAction dist = forecaster.NextCellDistribution();
      // Adversaries: the rule that answers the mean forecast, an iid coin,
      // and a drifting rate.
      double mean_forecast = 0.0;
      for (int l = 0; l < forecaster.state().num_cells(); ++l) {
        mean_forecast += dist[l] * forecaster.state().grid[l];
      }
      int outcome;
      if (mode == 0) {
        outcome = OakesDawidNext(mean_forecast);
      } else if (mode == 1) {
        outcome = unit(gen) < 0.3 ? 1 : 0;
      } else {
        outcome = unit(gen) < (m % 2000 < 1000 ? 0.2 : 0.8) ? 1 : 0;
      }
      const int cell = rng.Categorical(dist);
      forecaster.Observe(cell, OutcomeReduced(outcome, 2));
    }
    const FosterState& state = forecaster.state();
    for (int l = 0; l < state.num_cells(); ++l) {
      CHECK(state.Overshoot(l) <= 0.05);
      CHECK(state.Shortfall(l) <= 0.05);
      const bool both_positive =
          state.Overshoot(l) > 0.0 && state.Shortfall(l) > 0.0;
      CHECK_FALSE(both_positive);
    }
  }
}

TEST_CASE("oakes-dawid rule") {
  CHECK(OakesDawidNext(0.7) == 0);
  CHECK(OakesDawidNext(0.3) == 1);
  CHECK(OakesDawidNext(0.5) == 0);
}

TEST_CASE("deterministic forecaster defeated, randomized one not") {
  const double eps = 0.1;
  const Grid grid = MakeRegularGrid(1, eps);
  const long n = 10000;

  FrequencyForecaster deterministic(grid);
  OakesDawidAdversary adversary;
  const CalibTranscript det =
      RunCalibration(&deterministic, &adversary, grid, 2, n, 1);
  CHECK(EpsCalibrationScore(det, grid, eps) >= 0.05);

  GridForecaster randomized(grid);
  OakesDawidAdversary adversary2;
  const CalibTranscript rand_t =
      RunCalibration(&randomized, &adversary2, grid, 2, n, 1);
  const double bound =
      6.0 * std::sqrt(std::log(static_cast<double>(grid.size())) / n);
  CHECK(WeightedCalibScore(rand_t, grid) <= bound);
}

TEST_CASE("grid forecaster meets the squared-norm rate") {
  const Grid grid = MakeRegularGrid(1, 0.125);
  const long n = 2000;
  double mean = 0.0;
  const int trials = 20;
  for (int trial = 0; trial < trials; ++trial) {
    GridForecaster forecaster(grid);
    IidOutcomeAdversary adversary(MixedAction{0.65, 0.35});
    const CalibTranscript t =
        RunCalibration(&forecaster, &adversary, grid, 2, n, trial);
    mean += WeightedCalibScore(t, grid);
  }
  mean /= trials;
  CHECK(mean <=
        6.0 * std::sqrt(std::log(static_cast<double>(grid.size())) / n));
}

TEST_CASE("eps-independent forecaster rate") {
  const long n = 4000;
  for (const double eps : {0.3, 0.1}) {
    const Grid grid = MakeRegularGrid(1, eps);
    double mean = 0.0;
    const int trials = 20;
    for (int trial = 0; trial < trials; ++trial) {
      NeighborhoodForecaster forecaster(grid);
      OakesDawidAdversary adversary;
      const CalibTranscript t =
          RunCalibration(&forecaster, &adversary, grid, 2, n, 100 + trial);
      mean += EpsCellScore(t, grid, eps);
    }
    mean /= trials;
    CHECK(mean <= std::sqrt(1.0 / n));
  }
}

TEST_CASE("triangulation rounding") {
  const Grid grid = MakeRegularGrid(1, 0.25);  // {0, 0.5, 1}

  // A vertex is returned deterministically.
  MixedAction w = TriangulationRound({0.5}, grid);
  CHECK(w[FindCell(grid, 0.5)] == doctest::Approx(1.0));

  // Linear interpolation within a segment.
  w = TriangulationRound({0.3}, grid);
  CHECK(w[FindCell(grid, 0.0)] == doctest::Approx(0.4));
  CHECK(w[FindCell(grid, 0.5)] == doctest::Approx(0.6));

  // Weights always sum to one; support stays within one lattice cell.
  std::mt19937 gen(13);
  const Grid grid2 = MakeRegularGrid(2, 0.25);
  for (int trial = 0; trial < 1000; ++trial) {
    const Vec q = FullToReduced(test::RandomMixed(gen, 3));
    MixedAction weights;
    try {
      weights = TriangulationRound(q, grid2);
    } catch (const std::invalid_argument&) {
      continue;  // outside the triangulated region near the diagonal face
    }
    double sum = 0.0;
    double diameter = 0.0;
    for (int i = 0; i < grid2.size(); ++i) {
      sum += weights[i];
      for (int j = 0; j < grid2.size(); ++j) {
        if (weights[i] > 1e-12 && weights[j] > 1e-12) {
          diameter = std::max(
              diameter,
              Dist2(grid2.reduced_points[i], grid2.reduced_points[j]));
        }
      }
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(diameter <= grid2.step * std::sqrt(2.0) + 1e-9);
  }

  CHECK_THROWS_AS(TriangulationRound({1.4}, grid), std::invalid_argument);
}

TEST_CASE("borel doubling schedule") {
  const auto schedule = BorelDoublingSchedule(1, 4);
  REQUIRE(schedule.size() == 4);
  CHECK(schedule[2].first == doctest::Approx(0.5));  // (1/8)^(1/3)
  CHECK(schedule[0].second == 2);
  CHECK(schedule[3].second == 16);
  for (std::size_t k = 1; k < schedule.size(); ++k) {
    CHECK(schedule[k].first < schedule[k - 1].first);
  }
  CHECK_THROWS_AS(BorelDoublingSchedule(1, 0), std::invalid_argument);
}

TEST_CASE("interval ball forecaster") {
  CHECK_THROWS_AS(IntervalBallForecaster(3, 0.2, 0.1), std::invalid_argument);

  IntervalBallForecaster forecaster(2, 0.2, 0.1);
  OakesDawidAdversary adversary;
  const Grid& grid = forecaster.grid();
  const long n = 4096;
  RunCalibration(&forecaster, &adversary, grid, 2, n, 3);
  const double theorem_bound = 12.0 * std::sqrt(2.0 / n * std::log(2.0 * n));
  CHECK(forecaster.Score() <= theorem_bound);
  CHECK(forecaster.Score() <= 0.35);
}

TEST_CASE("calibration csv export") {
  const Grid grid = MakeRegularGrid(1, 0.25);
  CalibTranscript t(2, grid.size());
  t.Record(0, 1);
  t.Record(2, 0);
  const std::string path = "/tmp/approachlab_calibration_test.csv";
  WriteCalibrationCsv(t, grid, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "stage,cell,prediction_coords,outcome");
  std::string line;
  std::getline(in, line);
  CHECK(line == "1,0,0,1");
  std::remove(path.c_str());
}

}  // namespace
}  // namespace approachlab

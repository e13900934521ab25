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

#ifndef APPROACHLAB_CALIBRATION_H_
#define APPROACHLAB_CALIBRATION_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "approachlab/approach.h"
#include "approachlab/engine.h"
#include "approachlab/geometry.h"
#include "approachlab/invariant.h"

namespace approachlab {

// Forecasts and scores live in the (Omega-1)-coordinate chart of the
// simplex: outcome m maps to the reduced unit vector (the origin for m = 0),
// and for two outcomes a forecast is the scalar probability of outcome 1.
Vec OutcomeReduced(int outcome, int omega);

// Regular forecast grid with lattice step 2*eps/sqrt(d) in the reduced
// chart, d = Omega - 1. Lattice points are clipped onto the simplex by
// Euclidean projection, so every point of the simplex is within eps of the
// grid. Lattice coordinates and neighbor structure are kept for the
// neighborhood-restricted forecaster.
Grid MakeRegularGrid(int reduced_dim, double eps);

// Neighbors differ by one lattice step in exactly one coordinate.
std::vector<std::vector<int>> GridNeighbors(const Grid& grid);

// Full play record of a forecasting game: per stage the predicted cell and
// the realized outcome, plus per-cell counts and outcome sums.
struct CalibTranscript {
  int omega = 0;
  int num_cells = 0;
  std::vector<int> predictions;
  std::vector<int> outcomes;
  std::vector<long> counts;
  std::vector<Vec> outcome_sums;  // reduced chart, per cell
  long stage = 0;

  CalibTranscript(int omega_in, int num_cells_in);
  void Record(int cell, int outcome);
  // Empirical outcome distribution of a cell, reduced chart; the origin for
  // empty cells.
  Vec CellAverage(int cell) const;
};

// max over visited cells of (N[l]/n) (||avg_l - p[l]|| - min_k ||avg_l -
// p[k]||); empty cells contribute zero.
double CalibScore(const CalibTranscript& t, const Grid& grid);
// Weighted variant with squared norms and the grid's additive weights.
double WeightedCalibScore(const CalibTranscript& t, const Grid& grid);
// sup over cells of (N[l]/n) (||p[l] - avg_l|| - eps), the quantity whose
// rate is independent of eps on regular grids.
double EpsCellScore(const CalibTranscript& t, const Grid& grid, double eps);

// eps-calibration score sup_p (|N[p,eps]|/n)(||pbar - avg|| - eps) with p
// ranging over the grid points and midpoints of consecutive points (exact
// for grid-valued forecasters). Two outcomes only.
double EpsCalibrationScore(const CalibTranscript& t, const Grid& grid,
                           double eps);

class Forecaster {
 public:
  virtual ~Forecaster() = default;
  virtual MixedAction NextCellDistribution() = 0;
  virtual void Observe(int cell, const Vec& reduced_outcome) = 0;
  virtual void Reset() = 0;
};

// Internal-regret driven forecaster on a fixed grid: the auxiliary payoff of
// predicting cell l on outcome w is -||w - p[l]||^2 (+ the cell weight when
// the grid carries weights); the played distribution is an invariant measure
// of the positive-part regret matrix.
class GridForecaster : public Forecaster {
 public:
  explicit GridForecaster(Grid grid);
  MixedAction NextCellDistribution() override;
  void Observe(int cell, const Vec& reduced_outcome) override;
  void Reset() override;
  const Matrix& regret_sums() const { return regret_sums_; }

 private:
  Grid grid_;
  Matrix regret_sums_;
  MixedAction last_play_;
  long stage_ = 0;
};

// Rebuilds the auxiliary internal-regret matrix from transcript counters and
// returns the invariant measure of its positive part.
MixedAction GridForecasterStep(const CalibTranscript& t, const Grid& grid);

// Same machinery with the regret matrix restricted to lattice neighbors,
// giving a rate independent of the grid resolution. Requires a regular grid.
class NeighborhoodForecaster : public Forecaster {
 public:
  explicit NeighborhoodForecaster(Grid grid);
  MixedAction NextCellDistribution() override;
  void Observe(int cell, const Vec& reduced_outcome) override;
  void Reset() override;

 private:
  Grid grid_;
  std::vector<std::vector<int>> neighbors_;
  Matrix regret_sums_;
  MixedAction last_play_;
  long stage_ = 0;
};
MixedAction NeighborhoodForecasterStep(const CalibTranscript& t,
                                       const Grid& grid);

// Binary forecaster on the grid eps, 3*eps, 5*eps, ...: per cell it tracks
// the overshoot e (frequency-scaled excess of the empirical rate above
// p + eps) and the undershoot d (shortfall below p - eps), never positive
// together. theta merges them into a signed indicator whose sign crossing is
// found by bisection; at the crossing the two bordering cells are mixed so
// the expected drift of both scores vanishes.
struct FosterState {
  double eps = 0.0;
  Vec grid;            // forecast values in [0, 1]
  Vec overshoot_sums;  // n * e, per cell
  Vec shortfall_sums;  // n * d, per cell
  long stage = 0;

  explicit FosterState(double eps_in);
  int num_cells() const { return static_cast<int>(grid.size()); }
  double Overshoot(int cell) const;   // e
  double Shortfall(int cell) const;   // d
  double Theta(int cell) const;
  void Record(int cell, int outcome);
};

struct FosterStep {
  MixedAction distribution;  // over grid cells
  int probes = 0;            // theta evaluations consumed by the bisection
};
FosterStep FosterForecastStep(const FosterState& state);

class FosterForecaster : public Forecaster {
 public:
  explicit FosterForecaster(double eps) : state_(eps) {}
  MixedAction NextCellDistribution() override;
  void Observe(int cell, const Vec& reduced_outcome) override;
  void Reset() override { state_ = FosterState(state_.eps); }
  const FosterState& state() const { return state_; }

 private:
  FosterState state_;
};

// Deterministic forecaster that predicts the grid cell nearest to the
// running empirical outcome distribution.
class FrequencyForecaster : public Forecaster {
 public:
  explicit FrequencyForecaster(Grid grid);
  MixedAction NextCellDistribution() override;
  void Observe(int cell, const Vec& reduced_outcome) override;
  void Reset() override;

 private:
  Grid grid_;
  Vec outcome_sum_;
  long stage_ = 0;
};

// The outcome rule that defeats every deterministic forecaster: no rain
// exactly when rain was called with probability at least one half.
int OakesDawidNext(double rain_probability);

// Adversaries observe the declared cell distribution (a deterministic
// function of the history), never the sampled cell.
class CalibAdversary {
 public:
  virtual ~CalibAdversary() = default;
  virtual int Outcome(const MixedAction& cell_distribution, const Grid& grid,
                      const CalibTranscript& history, Rng* rng) = 0;
  virtual void Reset() {}
};

class IidOutcomeAdversary : public CalibAdversary {
 public:
  explicit IidOutcomeAdversary(MixedAction law) : law_(std::move(law)) {}
  int Outcome(const MixedAction&, const Grid&, const CalibTranscript&,
              Rng* rng) override {
    return rng->Categorical(law_);
  }

 private:
  MixedAction law_;
};

// Applies the rule to the mean forecast probability of outcome 1.
class OakesDawidAdversary : public CalibAdversary {
 public:
  int Outcome(const MixedAction& cell_distribution, const Grid& grid,
              const CalibTranscript& history, Rng* rng) override;
};

// Runs n stages of forecaster vs adversary; the forecast cell is sampled
// after the adversary commits.
CalibTranscript RunCalibration(Forecaster* forecaster,
                               CalibAdversary* adversary, const Grid& grid,
                               int omega, long n, std::uint64_t seed);

// Barycentric rounding of a reduced-chart point onto the grid: weights of
// the vertices of the containing lattice simplex (segment endpoints for two
// outcomes), found by the sorted-fractional-part decomposition.
MixedAction TriangulationRound(const Vec& reduced_point, const Grid& grid);

// Block schedule (eps_k, 2^k) with eps_k = (d / 2^k)^(1/(d+2)), k = 1..blocks.
std::vector<std::pair<double, long>> BorelDoublingSchedule(int reduced_dim,
                                                           int blocks);

// Sup-norm calibration over the family of all subintervals of [0, 1],
// implemented for two outcomes as the softmax-potential approachability
// strategy on the interval-indicator payoff game with a centered box target
// of radius `ball_eps`. Larger outcome spaces are unsupported.
class IntervalBallForecaster : public Forecaster {
 public:
  IntervalBallForecaster(int omega, double grid_step, double ball_eps);
  MixedAction NextCellDistribution() override;
  void Observe(int cell, const Vec& reduced_outcome) override;
  void Reset() override;
  const Grid& grid() const { return grid_; }
  // sup over intervals of the running mean indicator-weighted forecast
  // error, the quantity the box target controls.
  double Score() const;

 private:
  Vec AuxPayoff(int cell, double outcome) const;
  Grid grid_;
  std::vector<std::pair<int, int>> intervals_;
  double ball_eps_;
  VectorGame transformed_;
  PotentialState potential_;
  Vec aux_sum_;
  long stage_ = 0;
};

// CSV export with header stage,cell,prediction_coords,outcome (coordinates
// of the reduced chart joined by ';').
void WriteCalibrationCsv(const CalibTranscript& t, const Grid& grid,
                         const std::string& csv_path);

}  // namespace approachlab

#endif  // APPROACHLAB_CALIBRATION_H_

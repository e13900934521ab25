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

#include "approachlab/calibration.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>

namespace approachlab {
namespace {

double SquaredDist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

Matrix PositiveMatrix(const Matrix& m) {
  Matrix out = m;
  for (Vec& row : out) {
    for (double& v : row) v = std::max(v, 0.0);
  }
  return out;
}

}  // namespace

Vec OutcomeReduced(int outcome, int omega) {
  if (outcome < 0 || outcome >= omega) {
    throw std::invalid_argument("OutcomeReduced: outcome out of range");
  }
  Vec v(omega - 1, 0.0);
  if (outcome > 0) v[outcome - 1] = 1.0;
  return v;
}

Grid MakeRegularGrid(int reduced_dim, double eps) {
  if (reduced_dim < 1) {
    throw std::invalid_argument("MakeRegularGrid: dimension must be >= 1");
  }
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw std::invalid_argument("MakeRegularGrid: eps must be in (0, 1]");
  }
  const double step = 2.0 * eps / std::sqrt(static_cast<double>(reduced_dim));
  const int per_axis = static_cast<int>(std::ceil(1.0 / step)) + 1;

  Grid grid;
  grid.regular = true;
  grid.step = step;

  std::vector<int> lattice(reduced_dim, 0);
  std::function<void(int)> recurse = [&](int axis) {
    if (axis == reduced_dim) {
      Vec q(reduced_dim);
      for (int k = 0; k < reduced_dim; ++k) q[k] = lattice[k] * step;
      const Vec projected = CornerSimplexProject(q);
      for (const Vec& existing : grid.reduced_points) {
        if (SquaredDist(existing, projected) <= 1e-18) return;
      }
      grid.reduced_points.push_back(projected);
      grid.points.push_back(ReducedToFull(projected));
      grid.lattice.push_back(lattice);
      return;
    }
    for (int k = 0; k <= per_axis; ++k) {
      lattice[axis] = k;
      double partial = 0.0;
      for (int j = 0; j <= axis; ++j) partial += lattice[j] * step;
      if (partial > 1.0 + step) break;
      recurse(axis + 1);
    }
  };
  recurse(0);
  grid.weights.assign(grid.size(), 0.0);
  return grid;
}

std::vector<std::vector<int>> GridNeighbors(const Grid& grid) {
  if (!grid.regular) {
    throw std::invalid_argument("GridNeighbors: grid is not regular");
  }
  const int n = grid.size();
  std::vector<std::vector<int>> neighbors(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      int diff_axis = -1;
      bool neighbor = true;
      for (std::size_t k = 0; k < grid.lattice[i].size(); ++k) {
        const int d = grid.lattice[i][k] - grid.lattice[j][k];
        if (d == 0) continue;
        if (std::abs(d) != 1 || diff_axis >= 0) {
          neighbor = false;
          break;
        }
        diff_axis = static_cast<int>(k);
      }
      if (neighbor && diff_axis >= 0) neighbors[i].push_back(j);
    }
  }
  return neighbors;
}

CalibTranscript::CalibTranscript(int omega_in, int num_cells_in)
    : omega(omega_in),
      num_cells(num_cells_in),
      counts(num_cells_in, 0),
      outcome_sums(num_cells_in, Vec(omega_in - 1, 0.0)) {}

void CalibTranscript::Record(int cell, int outcome) {
  if (cell < 0 || cell >= num_cells) {
    throw std::invalid_argument("CalibTranscript: cell index out of range");
  }
  predictions.push_back(cell);
  outcomes.push_back(outcome);
  ++counts[cell];
  Axpy(1.0, OutcomeReduced(outcome, omega), &outcome_sums[cell]);
  ++stage;
}

Vec CalibTranscript::CellAverage(int cell) const {
  if (counts[cell] == 0) return Vec(omega - 1, 0.0);
  return Scale(outcome_sums[cell], 1.0 / counts[cell]);
}

double CalibScore(const CalibTranscript& t, const Grid& grid) {
  if (t.num_cells != grid.size()) {
    throw std::invalid_argument("CalibScore: transcript/grid size mismatch");
  }
  if (t.stage == 0) return 0.0;
  double score = 0.0;
  for (int l = 0; l < grid.size(); ++l) {
    if (t.counts[l] == 0) continue;
    const Vec avg = t.CellAverage(l);
    const double own = std::sqrt(SquaredDist(avg, grid.reduced_points[l]));
    double best = own;
    for (int k = 0; k < grid.size(); ++k) {
      best = std::min(best,
                      std::sqrt(SquaredDist(avg, grid.reduced_points[k])));
    }
    score = std::max(score, static_cast<double>(t.counts[l]) / t.stage *
                                (own - best));
  }
  return score;
}

double WeightedCalibScore(const CalibTranscript& t, const Grid& grid) {
  if (t.num_cells != grid.size()) {
    throw std::invalid_argument(
        "WeightedCalibScore: transcript/grid size mismatch");
  }
  if (t.stage == 0) return 0.0;
  double score = 0.0;
  for (int l = 0; l < grid.size(); ++l) {
    if (t.counts[l] == 0) continue;
    const Vec avg = t.CellAverage(l);
    const double own =
        SquaredDist(avg, grid.reduced_points[l]) - grid.weights[l];
    double best = own;
    for (int k = 0; k < grid.size(); ++k) {
      best = std::min(best, SquaredDist(avg, grid.reduced_points[k]) -
                                grid.weights[k]);
    }
    score = std::max(score, static_cast<double>(t.counts[l]) / t.stage *
                                (own - best));
  }
  return score;
}

double EpsCellScore(const CalibTranscript& t, const Grid& grid, double eps) {
  if (t.stage == 0) return 0.0;
  double score = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (int l = 0; l < grid.size(); ++l) {
    if (t.counts[l] == 0) continue;
    any = true;
    const double dist =
        std::sqrt(SquaredDist(t.CellAverage(l), grid.reduced_points[l]));
    score = std::max(score, static_cast<double>(t.counts[l]) / t.stage *
                                (dist - eps));
  }
  return any ? score : 0.0;
}

double EpsCalibrationScore(const CalibTranscript& t, const Grid& grid,
                           double eps) {
  if (t.omega != 2) {
    throw std::invalid_argument("EpsCalibrationScore: two outcomes only");
  }
  if (t.stage == 0) return 0.0;
  std::vector<double> values;
  for (const Vec& p : grid.reduced_points) values.push_back(p[0]);
  std::sort(values.begin(), values.end());
  std::vector<double> evals = values;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    evals.push_back(0.5 * (values[i] + values[i + 1]));
  }

  double score = 0.0;
  for (double p : evals) {
    long count = 0;
    double forecast_sum = 0.0, outcome_sum = 0.0;
    for (int l = 0; l < grid.size(); ++l) {
      if (t.counts[l] == 0) continue;
      const double v = grid.reduced_points[l][0];
      if (std::abs(v - p) <= eps + 1e-12) {
        count += t.counts[l];
        forecast_sum += t.counts[l] * v;
        outcome_sum += t.outcome_sums[l][0];
      }
    }
    if (count == 0) continue;
    const double gap = std::abs(forecast_sum / count - outcome_sum / count);
    score = std::max(score,
                     static_cast<double>(count) / t.stage * (gap - eps));
  }
  return score;
}

GridForecaster::GridForecaster(Grid grid)
    : grid_(std::move(grid)),
      regret_sums_(grid_.size(), Vec(grid_.size(), 0.0)),
      last_play_(UniformAction(grid_.size())) {}

MixedAction GridForecaster::NextCellDistribution() {
  last_play_ = InvariantMeasure(PositiveMatrix(regret_sums_), &last_play_);
  return last_play_;
}

void GridForecaster::Observe(int cell, const Vec& reduced_outcome) {
  const int n = grid_.size();
  // rho(l, w) = -||w - p[l]||^2 + nu[l].
  Vec payoff(n);
  for (int l = 0; l < n; ++l) {
    payoff[l] =
        -SquaredDist(reduced_outcome, grid_.reduced_points[l]) +
        grid_.weights[l];
  }
  for (int k = 0; k < n; ++k) {
    regret_sums_[cell][k] += payoff[k] - payoff[cell];
  }
  ++stage_;
}

void GridForecaster::Reset() {
  regret_sums_.assign(grid_.size(), Vec(grid_.size(), 0.0));
  last_play_ = UniformAction(grid_.size());
  stage_ = 0;
}

MixedAction GridForecasterStep(const CalibTranscript& t, const Grid& grid) {
  const int n = grid.size();
  Matrix regret(n, Vec(n, 0.0));
  for (int l = 0; l < n; ++l) {
    if (t.counts[l] == 0) continue;
    const Vec avg = t.CellAverage(l);
    const double own = SquaredDist(avg, grid.reduced_points[l]);
    for (int k = 0; k < n; ++k) {
      regret[l][k] = t.counts[l] *
                     (own - SquaredDist(avg, grid.reduced_points[k]) +
                      grid.weights[k] - grid.weights[l]);
    }
  }
  return InvariantMeasure(PositiveMatrix(regret));
}

NeighborhoodForecaster::NeighborhoodForecaster(Grid grid)
    : grid_(std::move(grid)),
      neighbors_(GridNeighbors(grid_)),
      regret_sums_(grid_.size(), Vec(grid_.size(), 0.0)),
      last_play_(UniformAction(grid_.size())) {}

MixedAction NeighborhoodForecaster::NextCellDistribution() {
  last_play_ = InvariantMeasure(PositiveMatrix(regret_sums_), &last_play_);
  return last_play_;
}

void NeighborhoodForecaster::Observe(int cell, const Vec& reduced_outcome) {
  const double own =
      SquaredDist(reduced_outcome, grid_.reduced_points[cell]);
  for (int k : neighbors_[cell]) {
    regret_sums_[cell][k] +=
        own - SquaredDist(reduced_outcome, grid_.reduced_points[k]);
  }
  ++stage_;
}

void NeighborhoodForecaster::Reset() {
  regret_sums_.assign(grid_.size(), Vec(grid_.size(), 0.0));
  last_play_ = UniformAction(grid_.size());
  stage_ = 0;
}

MixedAction NeighborhoodForecasterStep(const CalibTranscript& t,
                                       const Grid& grid) {
  const auto neighbors = GridNeighbors(grid);
  const int n = grid.size();
  Matrix regret(n, Vec(n, 0.0));
  for (int l = 0; l < n; ++l) {
    if (t.counts[l] == 0) continue;
    const Vec avg = t.CellAverage(l);
    const double own = SquaredDist(avg, grid.reduced_points[l]);
    for (int k : neighbors[l]) {
      regret[l][k] =
          t.counts[l] * (own - SquaredDist(avg, grid.reduced_points[k]));
    }
  }
  return InvariantMeasure(PositiveMatrix(regret));
}

FosterState::FosterState(double eps_in) : eps(eps_in) {
  if (!(eps > 0.0 && eps <= 0.5)) {
    throw std::invalid_argument("FosterState: eps must be in (0, 0.5]");
  }
  const int cells =
      static_cast<int>(std::ceil(1.0 / (2.0 * eps) - 1e-12));
  for (int l = 0; l < cells; ++l) {
    grid.push_back(std::min(eps + 2.0 * l * eps, 1.0));
  }
  overshoot_sums.assign(cells, 0.0);
  shortfall_sums.assign(cells, 0.0);
}

double FosterState::Overshoot(int cell) const {
  return stage == 0 ? 0.0 : overshoot_sums[cell] / stage;
}

double FosterState::Shortfall(int cell) const {
  return stage == 0 ? 0.0 : shortfall_sums[cell] / stage;
}

double FosterState::Theta(int cell) const {
  const double e = Overshoot(cell);
  if (e > 0.0) return e;
  const double d = Shortfall(cell);
  if (d > 0.0) return -d;
  return 0.0;
}

void FosterState::Record(int cell, int outcome) {
  // Cell edges are eps + 2 l eps +- eps regardless of the clamped forecast
  // value, so the first shortfall and last overshoot stay nonpositive.
  const double center = eps + 2.0 * cell * eps;
  overshoot_sums[cell] += outcome - (center + eps);
  shortfall_sums[cell] += (center - eps) - outcome;
  ++stage;
}

FosterStep FosterForecastStep(const FosterState& state) {
  const int cells = state.num_cells();
  for (int l = 0; l < cells; ++l) {
    if (state.Overshoot(l) > 0.0 && state.Shortfall(l) > 0.0) {
      throw std::runtime_error(
          "FosterForecastStep: overshoot and shortfall both positive");
    }
  }
  FosterStep out;
  out.distribution.assign(cells, 0.0);
  if (cells == 1) {
    out.distribution[0] = 1.0;
    return out;
  }
  // The first theta is always >= 0 and the last <= 0; when either boundary
  // is zero that cell is calibrated and predicted outright. Otherwise a
  // strict sign crossing exists and the bisection locates it; `probes`
  // counts the theta evaluations of the bisection loop.
  if (state.Theta(0) == 0.0) {
    out.distribution[0] = 1.0;
    return out;
  }
  if (state.Theta(cells - 1) == 0.0) {
    out.distribution[cells - 1] = 1.0;
    return out;
  }
  int lo = 0, hi = cells - 1;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    ++out.probes;
    const double theta = state.Theta(mid);
    if (theta == 0.0) {
      out.distribution[mid] = 1.0;
      return out;
    }
    if (theta > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // Crossing between lo and hi: the overshooting cell lo pulls upward, the
  // undershooting cell hi pulls downward. Mixing with the crossed values
  // makes the expected drift of both tracked scores vanish for every
  // conditional outcome law.
  const double e_low = state.Overshoot(lo);
  const double d_high = state.Shortfall(hi);
  out.distribution[hi] = e_low / (e_low + d_high);
  out.distribution[lo] = d_high / (e_low + d_high);
  return out;
}

MixedAction FosterForecaster::NextCellDistribution() {
  return FosterForecastStep(state_).distribution;
}

void FosterForecaster::Observe(int cell, const Vec& reduced_outcome) {
  state_.Record(cell, reduced_outcome[0] >= 0.5 ? 1 : 0);
}

FrequencyForecaster::FrequencyForecaster(Grid grid)
    : grid_(std::move(grid)),
      outcome_sum_(grid_.reduced_points[0].size(), 0.0) {}

MixedAction FrequencyForecaster::NextCellDistribution() {
  Vec avg(outcome_sum_.size(),
          1.0 / (static_cast<double>(outcome_sum_.size()) + 1.0));
  if (stage_ > 0) avg = Scale(outcome_sum_, 1.0 / stage_);
  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int l = 0; l < grid_.size(); ++l) {
    const double d = SquaredDist(avg, grid_.reduced_points[l]);
    if (d < best_dist - 1e-15) {
      best_dist = d;
      best = l;
    }
  }
  MixedAction out(grid_.size(), 0.0);
  out[best] = 1.0;
  return out;
}

void FrequencyForecaster::Observe(int, const Vec& reduced_outcome) {
  Axpy(1.0, reduced_outcome, &outcome_sum_);
  ++stage_;
}

void FrequencyForecaster::Reset() {
  outcome_sum_.assign(outcome_sum_.size(), 0.0);
  stage_ = 0;
}

int OakesDawidNext(double rain_probability) {
  return rain_probability >= 0.5 ? 0 : 1;
}

int OakesDawidAdversary::Outcome(const MixedAction& cell_distribution,
                                 const Grid& grid, const CalibTranscript&,
                                 Rng*) {
  double rain = 0.0;
  for (int l = 0; l < grid.size(); ++l) {
    rain += cell_distribution[l] * grid.points[l][1];
  }
  return OakesDawidNext(rain);
}

CalibTranscript RunCalibration(Forecaster* forecaster,
                               CalibAdversary* adversary, const Grid& grid,
                               int omega, long n, std::uint64_t seed) {
  Rng rng(seed);
  CalibTranscript t(omega, grid.size());
  for (long m = 0; m < n; ++m) {
    const MixedAction dist = forecaster->NextCellDistribution();
    if (static_cast<int>(dist.size()) != grid.size() || !IsMixedAction(dist)) {
      throw std::runtime_error(
          "RunCalibration: invalid forecast distribution at stage " +
          std::to_string(m + 1));
    }
    const int outcome = adversary->Outcome(dist, grid, t, &rng);
    if (outcome < 0 || outcome >= omega) {
      throw std::runtime_error("RunCalibration: invalid outcome at stage " +
                               std::to_string(m + 1));
    }
    const int cell = rng.Categorical(dist);
    forecaster->Observe(cell, OutcomeReduced(outcome, omega));
    t.Record(cell, outcome);
  }
  return t;
}

MixedAction TriangulationRound(const Vec& reduced_point, const Grid& grid) {
  if (!grid.regular) {
    throw std::invalid_argument("TriangulationRound: grid is not regular");
  }
  const int d = static_cast<int>(reduced_point.size());
  double total = 0.0;
  for (double q : reduced_point) {
    if (q < -1e-9) {
      throw std::invalid_argument("TriangulationRound: point outside simplex");
    }
    total += q;
  }
  if (total > 1.0 + 1e-9) {
    throw std::invalid_argument("TriangulationRound: point outside simplex");
  }

  std::map<std::vector<int>, int> index;
  for (int l = 0; l < grid.size(); ++l) index[grid.lattice[l]] = l;

  std::vector<int> base(d);
  Vec frac(d);
  for (int k = 0; k < d; ++k) {
    const double u = reduced_point[k] / grid.step;
    base[k] = std::min(static_cast<int>(std::floor(u + 1e-12)),
                       static_cast<int>(std::floor(1.0 / grid.step)));
    base[k] = std::max(base[k], 0);
    frac[k] = u - base[k];
  }
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&frac](int i, int j) { return frac[i] > frac[j]; });

  MixedAction weights(grid.size(), 0.0);
  std::vector<int> vertex = base;
  auto add = [&](const std::vector<int>& v, double w) {
    if (w <= 1e-12) return;
    const auto it = index.find(v);
    if (it == index.end()) {
      throw std::invalid_argument(
          "TriangulationRound: point outside the triangulated region");
    }
    weights[it->second] += w;
  };
  add(vertex, 1.0 - (d > 0 ? frac[order[0]] : 0.0));
  for (int j = 0; j < d; ++j) {
    vertex[order[j]] += 1;
    const double w =
        (j + 1 < d) ? frac[order[j]] - frac[order[j + 1]] : frac[order[d - 1]];
    add(vertex, w);
  }
  // Exact barycentric identity up to roundoff.
  double sum = 0.0;
  for (double w : weights) sum += w;
  for (double& w : weights) w /= sum;
  return weights;
}

std::vector<std::pair<double, long>> BorelDoublingSchedule(int reduced_dim,
                                                           int blocks) {
  if (blocks < 1) {
    throw std::invalid_argument("BorelDoublingSchedule: blocks must be >= 1");
  }
  std::vector<std::pair<double, long>> out;
  for (int k = 1; k <= blocks; ++k) {
    const double eps =
        std::pow(static_cast<double>(reduced_dim) / std::pow(2.0, k),
                 1.0 / (reduced_dim + 2.0));
    out.emplace_back(eps, 1L << k);
  }
  return out;
}

IntervalBallForecaster::IntervalBallForecaster(int omega, double grid_step,
                                               double ball_eps)
    : ball_eps_(ball_eps),
      transformed_(VectorGame(1, 1, 1, {Vec{0.0}})),
      potential_(2) {
  if (omega != 2) {
    throw std::invalid_argument(
        "IntervalBallForecaster: unsupported, two outcomes only");
  }
  grid_ = MakeRegularGrid(1, grid_step / 2.0);
  const int cells = grid_.size();
  for (int i = 0; i < cells; ++i) {
    for (int j = i; j < cells; ++j) intervals_.emplace_back(i, j);
  }
  const int k_count = static_cast<int>(intervals_.size());
  std::vector<Vec> payoffs;
  payoffs.reserve(cells * 2);
  for (int l = 0; l < cells; ++l) {
    for (int w = 0; w < 2; ++w) {
      payoffs.push_back(AuxPayoff(l, static_cast<double>(w)));
    }
  }
  const VectorGame aux(cells, 2, k_count, std::move(payoffs));
  const auto box = ConvexTarget::Box(Vec(k_count, -ball_eps),
                                     Vec(k_count, ball_eps));
  transformed_ = BoxToOrthantGame(aux, box);
  potential_ = PotentialState(transformed_.dim());
  aux_sum_.assign(k_count, 0.0);
}

Vec IntervalBallForecaster::AuxPayoff(int cell, double outcome) const {
  Vec g(intervals_.size(), 0.0);
  const double p = grid_.reduced_points[cell][0];
  for (std::size_t k = 0; k < intervals_.size(); ++k) {
    const double lo = grid_.reduced_points[intervals_[k].first][0];
    const double hi = grid_.reduced_points[intervals_[k].second][0];
    if (p >= lo - 1e-12 && p <= hi + 1e-12) g[k] = p - outcome;
  }
  return g;
}

MixedAction IntervalBallForecaster::NextCellDistribution() {
  return PotentialLinfStep(potential_, transformed_);
}

void IntervalBallForecaster::Observe(int cell, const Vec& reduced_outcome) {
  const int w = reduced_outcome[0] >= 0.5 ? 1 : 0;
  potential_.Observe(transformed_.Payoff(cell, w));
  Axpy(1.0, AuxPayoff(cell, static_cast<double>(w)), &aux_sum_);
  ++stage_;
}

void IntervalBallForecaster::Reset() {
  potential_ = PotentialState(transformed_.dim());
  aux_sum_.assign(aux_sum_.size(), 0.0);
  stage_ = 0;
}

double IntervalBallForecaster::Score() const {
  if (stage_ == 0) return 0.0;
  return NormInf(aux_sum_) / stage_;
}

void WriteCalibrationCsv(const CalibTranscript& t, const Grid& grid,
                         const std::string& csv_path) {
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot open " + csv_path);
  csv << "stage,cell,prediction_coords,outcome\n";
  csv.precision(17);
  for (long m = 0; m < t.stage; ++m) {
    const int cell = t.predictions[m];
    csv << (m + 1) << ',' << cell << ',';
    const Vec& p = grid.reduced_points[cell];
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (k > 0) csv << ';';
      csv << p[k];
    }
    csv << ',' << t.outcomes[m] << '\n';
  }
}

}  // namespace approachlab

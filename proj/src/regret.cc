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

#include "approachlab/regret.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace approachlab {
namespace {

Vec OutcomeColumn(const ScalarGame& payoffs, int b) {
  Vec u(payoffs.rows());
  for (int a = 0; a < payoffs.rows(); ++a) u[a] = payoffs.rho[a][b];
  return u;
}

void AbsorbLastStage(const ScalarGame& payoffs, const HistoryView& view,
                     RegretState* state) {
  if (view.stage == 0) return;
  const Vec u = OutcomeColumn(payoffs, view.last_nature_action);
  if (view.last_player_action >= 0) {
    UpdateRegret(state, view.last_player_action, u);
  } else {
    UpdateRegretExpected(state, *view.last_player_mixed, u);
  }
}

}  // namespace

int SwapFamily::MaxSwapCount() const {
  int best = 0;
  for (int a = 0; a < num_actions; ++a) {
    int count = 0;
    for (const auto& phi : maps) {
      if (phi[a] != a) ++count;
    }
    best = std::max(best, count);
  }
  return best;
}

SwapFamily SwapFamily::External(int num_actions) {
  SwapFamily family;
  family.num_actions = num_actions;
  for (int target = 0; target < num_actions; ++target) {
    family.maps.emplace_back(num_actions, target);
  }
  return family;
}

SwapFamily SwapFamily::Internal(int num_actions) {
  SwapFamily family;
  family.num_actions = num_actions;
  for (int from = 0; from < num_actions; ++from) {
    for (int to = 0; to < num_actions; ++to) {
      if (from == to) continue;
      std::vector<int> phi(num_actions);
      for (int a = 0; a < num_actions; ++a) phi[a] = a;
      phi[from] = to;
      family.maps.push_back(std::move(phi));
    }
  }
  return family;
}

Matrix FamilyIncidence(const SwapFamily& family) {
  const int a_count = family.num_actions;
  Matrix h(family.size(), Vec(a_count * a_count, 0.0));
  for (int f = 0; f < family.size(); ++f) {
    for (int a = 0; a < a_count; ++a) {
      h[f][a * a_count + family.maps[f][a]] = 1.0;
    }
  }
  return h;
}

RegretState::RegretState(int num_actions_in, std::optional<SwapFamily> fam)
    : num_actions(num_actions_in),
      external_sum(num_actions_in, 0.0),
      pairwise_sum(num_actions_in, Vec(num_actions_in, 0.0)),
      family(std::move(fam)) {
  if (family.has_value()) {
    if (family->num_actions != num_actions) {
      throw std::invalid_argument("RegretState: family action count differs");
    }
    family_sum.assign(family->size(), 0.0);
  }
}

Vec RegretState::ExternalAverage() const {
  return stage == 0 ? Vec(num_actions, 0.0)
                    : Scale(external_sum, 1.0 / stage);
}

Matrix RegretState::PairwiseAverage() const {
  Matrix out = pairwise_sum;
  if (stage == 0) return out;
  for (Vec& row : out) {
    for (double& v : row) v /= stage;
  }
  return out;
}

Vec RegretState::FamilyAverage() const {
  return stage == 0 ? Vec(family_sum.size(), 0.0)
                    : Scale(family_sum, 1.0 / stage);
}

void UpdateRegret(RegretState* state, int played, const Vec& outcomes) {
  if (played < 0 || played >= state->num_actions) {
    throw std::invalid_argument("UpdateRegret: action index out of range");
  }
  CheckFinite(outcomes, "UpdateRegret outcomes");
  const double realized = outcomes[played];
  for (int a = 0; a < state->num_actions; ++a) {
    const double gain = outcomes[a] - realized;
    state->external_sum[a] += gain;
    state->pairwise_sum[played][a] += gain;
  }
  if (state->family.has_value()) {
    for (int f = 0; f < state->family->size(); ++f) {
      state->family_sum[f] += outcomes[state->family->maps[f][played]] -
                              realized;
    }
  }
  ++state->stage;
}

void UpdateRegretExpected(RegretState* state, const MixedAction& played,
                          const Vec& outcomes) {
  for (int a = 0; a < state->num_actions; ++a) {
    const double weight = played[a];
    if (weight == 0.0) continue;
    for (int k = 0; k < state->num_actions; ++k) {
      const double gain = weight * (outcomes[k] - outcomes[a]);
      state->external_sum[k] += gain;
      state->pairwise_sum[a][k] += gain;
    }
    if (state->family.has_value()) {
      for (int f = 0; f < state->family->size(); ++f) {
        state->family_sum[f] +=
            weight * (outcomes[state->family->maps[f][a]] - outcomes[a]);
      }
    }
  }
  ++state->stage;
}

MixedAction RegretMatchingStep(const Vec& external_regret) {
  double positive_sum = 0.0;
  for (double r : external_regret) positive_sum += std::max(r, 0.0);
  if (positive_sum <= 0.0) {
    return UniformAction(static_cast<int>(external_regret.size()));
  }
  MixedAction x(external_regret.size());
  for (std::size_t a = 0; a < x.size(); ++a) {
    x[a] = std::max(external_regret[a], 0.0) / positive_sum;
  }
  return x;
}

MixedAction Softmax(const Vec& values, double eta) {
  double max_arg = -std::numeric_limits<double>::infinity();
  for (double v : values) max_arg = std::max(max_arg, eta * v);
  MixedAction x(values.size());
  double sum = 0.0;
  for (std::size_t a = 0; a < values.size(); ++a) {
    x[a] = std::exp(eta * values[a] - max_arg);
    sum += x[a];
  }
  for (double& e : x) e /= sum;
  return x;
}

double ExpWeightsRate(int num_actions, long stage) {
  return std::sqrt(8.0 * stage * std::log(static_cast<double>(num_actions)));
}

MixedAction ExpWeightsStep(const Vec& average_outcomes, long stage) {
  if (stage < 1) throw std::invalid_argument("ExpWeightsStep: stage must be >= 1");
  const int a_count = static_cast<int>(average_outcomes.size());
  return Softmax(average_outcomes, ExpWeightsRate(a_count, stage));
}

MixedAction OgdStep(const MixedAction& x, const Vec& outcomes, double eta) {
  if (eta < 0.0) throw std::invalid_argument("OgdStep: eta must be >= 0");
  Vec moved = x;
  Axpy(eta, outcomes, &moved);
  return SimplexProject(moved);
}

Matrix ThetaMatrix(const Vec& family_values, const SwapFamily& family) {
  for (double v : family_values) {
    if (!(v >= 0.0)) {
      throw std::invalid_argument("ThetaMatrix: values must be >= 0");
    }
  }
  const int a_count = family.num_actions;
  Matrix theta(a_count, Vec(a_count, 0.0));
  for (int f = 0; f < family.size(); ++f) {
    for (int a = 0; a < a_count; ++a) {
      theta[a][family.maps[f][a]] += family_values[f];
    }
  }
  return theta;
}

MixedAction InvariantStep(const Matrix& nonneg, const MixedAction* warm_start) {
  return InvariantMeasure(nonneg, warm_start);
}

MixedAction ExtToPhiStep(const MixedAction& theta, const SwapFamily& family,
                         const MixedAction* warm_start) {
  CheckMixedAction(theta, "ExtToPhiStep theta");
  // Row-stochastic transport: row a spreads over the images phi(a); its
  // stationary distribution is the required fixed point.
  const Matrix transport = ThetaMatrix(theta, family);
  return StationaryDistribution(transport, warm_start);
}

LinfRegretLift MakeLinfRegretLift(int num_actions) {
  if (num_actions < 1) {
    throw std::invalid_argument("MakeLinfRegretLift: need at least 1 action");
  }
  const int dim = num_actions + 1;
  std::vector<Halfspace> halfspaces;
  // V^a - z <= 0 for each action.
  for (int a = 0; a < num_actions; ++a) {
    Vec normal(dim, 0.0);
    normal[0] = -1.0;
    normal[1 + a] = 1.0;
    halfspaces.push_back({std::move(normal), 0.0});
  }
  // Unit box.
  for (int k = 0; k < dim; ++k) {
    Vec up(dim, 0.0), down(dim, 0.0);
    up[k] = 1.0;
    down[k] = -1.0;
    halfspaces.push_back({std::move(up), 1.0});
    halfspaces.push_back({std::move(down), 0.0});
  }
  Vec witness(dim, 0.0);
  witness[0] = 1.0;
  return {num_actions,
          ConvexTarget::HalfspaceIntersection(std::move(halfspaces),
                                              std::move(witness))};
}

Vec LinfLiftPayoff(int played, const Vec& outcomes) {
  Vec g(outcomes.size() + 1);
  g[0] = outcomes[played];
  for (std::size_t a = 0; a < outcomes.size(); ++a) g[1 + a] = outcomes[a];
  return g;
}

Vec UnitBallProject(const Vec& v) {
  const double norm = Norm2(v);
  return norm <= 1.0 ? v : Scale(v, 1.0 / norm);
}

RegretDrivenApproachStrategy::RegretDrivenApproachStrategy(VectorGame game)
    : game_(std::move(game)), theta_(game_.dim(), 0.0) {}

MixedAction RegretDrivenApproachStrategy::Next(const HistoryView& view) {
  if (view.stage > 0) {
    const double eta =
        1.0 / (std::max(game_.NormInfBound(), 1e-12) *
               std::sqrt(static_cast<double>(view.stage)));
    Vec moved = theta_;
    Axpy(eta, *view.last_payoff, &moved);
    theta_ = UnitBallProject(moved);
  }
  if (Norm2(theta_) <= 1e-15) return UniformAction(game_.A());
  ScalarGame projected;
  projected.rho.assign(game_.A(), Vec(game_.B(), 0.0));
  for (int a = 0; a < game_.A(); ++a) {
    for (int b = 0; b < game_.B(); ++b) {
      projected.rho[a][b] = -Dot(theta_, game_.Payoff(a, b));
    }
  }
  return Solve(projected, 1e-9).x;
}

void RegretDrivenApproachStrategy::Reset() {
  theta_.assign(game_.dim(), 0.0);
}

RegretMatchingStrategy::RegretMatchingStrategy(ScalarGame payoffs)
    : payoffs_(std::move(payoffs)), state_(payoffs_.rows()) {}

MixedAction RegretMatchingStrategy::Next(const HistoryView& view) {
  Absorb(view);
  return RegretMatchingStep(state_.external_sum);
}

void RegretMatchingStrategy::Absorb(const HistoryView& view) {
  AbsorbLastStage(payoffs_, view, &state_);
}

void RegretMatchingStrategy::Reset() { state_ = RegretState(payoffs_.rows()); }

ExpWeightsStrategy::ExpWeightsStrategy(ScalarGame payoffs)
    : payoffs_(std::move(payoffs)), outcome_sum_(payoffs_.rows(), 0.0) {}

MixedAction ExpWeightsStrategy::Next(const HistoryView& view) {
  if (view.stage > 0) {
    for (int a = 0; a < payoffs_.rows(); ++a) {
      outcome_sum_[a] += payoffs_.rho[a][view.last_nature_action];
    }
    ++stage_;
  }
  if (stage_ == 0) return UniformAction(payoffs_.rows());
  // sqrt(8 n log A) on averages equals sqrt(8 log A / n) on sums.
  const double eta = ExpWeightsRate(payoffs_.rows(), stage_) / stage_;
  return Softmax(outcome_sum_, eta);
}

void ExpWeightsStrategy::Reset() {
  outcome_sum_.assign(payoffs_.rows(), 0.0);
  stage_ = 0;
}

OgdStrategy::OgdStrategy(ScalarGame payoffs)
    : payoffs_(std::move(payoffs)), iterate_(UniformAction(payoffs_.rows())) {}

MixedAction OgdStrategy::Next(const HistoryView& view) {
  if (view.stage > 0) {
    const long block_length = 1L << block_;
    const double eta =
        1.0 / std::sqrt(static_cast<double>(block_length) * payoffs_.rows());
    iterate_ = OgdStep(iterate_, OutcomeColumn(payoffs_, view.last_nature_action),
                       eta);
    if (++stage_in_block_ >= block_length) {
      ++block_;
      stage_in_block_ = 0;
      iterate_ = UniformAction(payoffs_.rows());
    }
  }
  return iterate_;
}

void OgdStrategy::Reset() {
  iterate_ = UniformAction(payoffs_.rows());
  block_ = 0;
  stage_in_block_ = 0;
}

InternalRegretStrategy::InternalRegretStrategy(ScalarGame payoffs)
    : payoffs_(std::move(payoffs)),
      state_(payoffs_.rows()),
      last_play_(UniformAction(payoffs_.rows())) {}

MixedAction InternalRegretStrategy::Next(const HistoryView& view) {
  AbsorbLastStage(payoffs_, view, &state_);
  Matrix positive = state_.pairwise_sum;
  for (Vec& row : positive) {
    for (double& v : row) v = std::max(v, 0.0);
  }
  last_play_ = InvariantStep(positive, &last_play_);
  return last_play_;
}

void InternalRegretStrategy::Reset() {
  state_ = RegretState(payoffs_.rows());
  last_play_ = UniformAction(payoffs_.rows());
}

PhiRegretStrategy::PhiRegretStrategy(ScalarGame payoffs, SwapFamily family)
    : payoffs_(std::move(payoffs)),
      state_(payoffs_.rows(), std::move(family)),
      last_play_(UniformAction(payoffs_.rows())) {}

MixedAction PhiRegretStrategy::Next(const HistoryView& view) {
  AbsorbLastStage(payoffs_, view, &state_);
  last_play_ = InvariantStep(
      ThetaMatrix(PositivePart(state_.family_sum), *state_.family),
      &last_play_);
  return last_play_;
}

void PhiRegretStrategy::Reset() {
  state_ = RegretState(payoffs_.rows(), state_.family);
  last_play_ = UniformAction(payoffs_.rows());
}

ExtToPhiStrategy::ExtToPhiStrategy(ScalarGame payoffs, SwapFamily family)
    : payoffs_(std::move(payoffs)),
      family_(std::move(family)),
      family_regret_sum_(family_.size(), 0.0),
      last_play_(UniformAction(payoffs_.rows())) {}

MixedAction ExtToPhiStrategy::Next(const HistoryView& view) {
  if (view.stage > 0) {
    // Auxiliary-game external regret of each map against the mixed action
    // that was actually played.
    const Vec u = OutcomeColumn(payoffs_, view.last_nature_action);
    const MixedAction& played = *view.last_player_mixed;
    for (int f = 0; f < family_.size(); ++f) {
      double gain = 0.0;
      for (int a = 0; a < payoffs_.rows(); ++a) {
        gain += played[a] * (u[family_.maps[f][a]] - u[a]);
      }
      family_regret_sum_[f] += gain;
    }
  }
  const MixedAction theta = RegretMatchingStep(family_regret_sum_);
  last_play_ = ExtToPhiStep(theta, family_, &last_play_);
  return last_play_;
}

void ExtToPhiStrategy::Reset() {
  family_regret_sum_.assign(family_.size(), 0.0);
  last_play_ = UniformAction(payoffs_.rows());
}

int BestResponseNature::Next(const HistoryView& view, Rng*) {
  if (view.stage == 0) return 0;
  const MixedAction& x = *view.last_player_mixed;
  int best = 0;
  double best_value = RowPayoff(payoffs_, x, 0);
  for (int b = 1; b < payoffs_.cols(); ++b) {
    const double v = RowPayoff(payoffs_, x, b);
    if (v < best_value) {
      best_value = v;
      best = b;
    }
  }
  return best;
}

}  // namespace approachlab

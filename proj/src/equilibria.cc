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

#include "approachlab/equilibria.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace approachlab {
namespace {

// Per-player online learner reused across the self-play algorithms.
class Learner {
 public:
  Learner(SelfPlayAlgorithm algorithm, int num_actions)
      : algorithm_(algorithm),
        state_(num_actions),
        outcome_sum_(num_actions, 0.0),
        last_play_(UniformAction(num_actions)) {}

  MixedAction Play() {
    switch (algorithm_) {
      case SelfPlayAlgorithm::kRegretMatching:
        return RegretMatchingStep(state_.external_sum);
      case SelfPlayAlgorithm::kExpWeights: {
        if (state_.stage == 0) return UniformAction(state_.num_actions);
        const double eta =
            ExpWeightsRate(state_.num_actions, state_.stage) / state_.stage;
        return Softmax(outcome_sum_, eta);
      }
      case SelfPlayAlgorithm::kInternal: {
        Matrix positive = state_.pairwise_sum;
        for (Vec& row : positive) {
          for (double& v : row) v = std::max(v, 0.0);
        }
        last_play_ = InvariantStep(positive, &last_play_);
        return last_play_;
      }
    }
    return UniformAction(state_.num_actions);
  }

  void Observe(int played, const Vec& outcomes) {
    UpdateRegret(&state_, played, outcomes);
    Axpy(1.0, outcomes, &outcome_sum_);
  }

 private:
  SelfPlayAlgorithm algorithm_;
  RegretState state_;
  Vec outcome_sum_;
  MixedAction last_play_;
};

}  // namespace

long NPlayerGame::num_profiles() const {
  long count = 1;
  for (int a : action_counts) count *= a;
  return count;
}

long NPlayerGame::ProfileIndex(const std::vector<int>& profile) const {
  long index = 0;
  for (int i = 0; i < num_players(); ++i) {
    index = index * action_counts[i] + profile[i];
  }
  return index;
}

double NPlayerGame::Payoff(int player, const std::vector<int>& profile) const {
  return payoffs[player][ProfileIndex(profile)];
}

NPlayerGame NPlayerGame::TwoPlayer(const ScalarGame& row_payoffs,
                                   const ScalarGame& col_payoffs) {
  CheckScalarGame(row_payoffs);
  CheckScalarGame(col_payoffs);
  if (row_payoffs.rows() != col_payoffs.rows() ||
      row_payoffs.cols() != col_payoffs.cols()) {
    throw std::invalid_argument("TwoPlayer: payoff shapes differ");
  }
  NPlayerGame game;
  game.action_counts = {row_payoffs.rows(), row_payoffs.cols()};
  Vec first, second;
  for (int a = 0; a < row_payoffs.rows(); ++a) {
    for (int b = 0; b < row_payoffs.cols(); ++b) {
      first.push_back(row_payoffs.rho[a][b]);
      second.push_back(col_payoffs.rho[a][b]);
    }
  }
  game.payoffs = {std::move(first), std::move(second)};
  return game;
}

NPlayerGame NPlayerGame::ZeroSumTwoPlayer(const ScalarGame& row_payoffs) {
  ScalarGame negated = row_payoffs;
  for (Vec& row : negated.rho) {
    for (double& v : row) v = -v;
  }
  return TwoPlayer(row_payoffs, negated);
}

void CheckNPlayerGame(const NPlayerGame& game) {
  if (game.num_players() == 0) {
    throw std::invalid_argument("NPlayerGame: no players");
  }
  for (int a : game.action_counts) {
    if (a < 1) throw std::invalid_argument("NPlayerGame: empty action set");
  }
  if (static_cast<int>(game.payoffs.size()) != game.num_players()) {
    throw std::invalid_argument("NPlayerGame: payoff tensor count mismatch");
  }
  for (const Vec& tensor : game.payoffs) {
    if (static_cast<long>(tensor.size()) != game.num_profiles()) {
      throw std::invalid_argument("NPlayerGame: payoff tensor size mismatch");
    }
    CheckFinite(tensor, "NPlayerGame payoffs");
  }
}

void CheckJointDistribution(const NPlayerGame& game,
                            const JointDistribution& q) {
  if (static_cast<long>(q.size()) != game.num_profiles()) {
    throw std::invalid_argument("JointDistribution: shape mismatch");
  }
  double sum = 0.0;
  for (double v : q) {
    if (!(v >= -1e-12)) {
      throw std::invalid_argument("JointDistribution: negative mass");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("JointDistribution: mass must sum to 1");
  }
}

namespace {

// Calls fn(profile, q[profile]) for every profile with positive mass.
void ForEachProfile(
    const NPlayerGame& game, const JointDistribution& q,
    const std::function<void(const std::vector<int>&, double)>& fn) {
  std::vector<int> profile(game.num_players(), 0);
  const long total = game.num_profiles();
  for (long index = 0; index < total; ++index) {
    long rest = index;
    for (int i = game.num_players() - 1; i >= 0; --i) {
      profile[i] = static_cast<int>(rest % game.action_counts[i]);
      rest /= game.action_counts[i];
    }
    if (q[index] != 0.0) fn(profile, q[index]);
  }
}

}  // namespace

Vec HannanViolation(const NPlayerGame& game, const JointDistribution& q) {
  CheckNPlayerGame(game);
  CheckJointDistribution(game, q);
  Vec violations(game.num_players(), 0.0);
  for (int i = 0; i < game.num_players(); ++i) {
    Vec deviation_value(game.action_counts[i], 0.0);
    double realized = 0.0;
    ForEachProfile(game, q, [&](const std::vector<int>& profile, double mass) {
      realized += mass * game.Payoff(i, profile);
      std::vector<int> deviated = profile;
      for (int a = 0; a < game.action_counts[i]; ++a) {
        deviated[i] = a;
        deviation_value[a] += mass * game.Payoff(i, deviated);
      }
    });
    double best = deviation_value.empty() ? 0.0 : deviation_value[0];
    for (double v : deviation_value) best = std::max(best, v);
    violations[i] = best - realized;
  }
  return violations;
}

Vec CorrelatedViolation(const NPlayerGame& game, const JointDistribution& q) {
  CheckNPlayerGame(game);
  CheckJointDistribution(game, q);
  Vec violations(game.num_players(), 0.0);
  for (int i = 0; i < game.num_players(); ++i) {
    const int a_count = game.action_counts[i];
    // gains[a][a*] = sum over profiles with a_i = a of q * (payoff after
    // switching to a* minus the realized payoff).
    Matrix gains(a_count, Vec(a_count, 0.0));
    ForEachProfile(game, q, [&](const std::vector<int>& profile, double mass) {
      const int recommended = profile[i];
      const double realized = game.Payoff(i, profile);
      std::vector<int> deviated = profile;
      for (int a = 0; a < a_count; ++a) {
        deviated[i] = a;
        gains[recommended][a] += mass * (game.Payoff(i, deviated) - realized);
      }
    });
    double worst = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < a_count; ++a) {
      for (int dev = 0; dev < a_count; ++dev) {
        worst = std::max(worst, gains[a][dev]);
      }
    }
    violations[i] = worst;
  }
  return violations;
}

SelfPlayResult SelfPlay(const NPlayerGame& game,
                        const std::vector<SelfPlayAlgorithm>& algorithms,
                        long n, std::uint64_t seed) {
  CheckNPlayerGame(game);
  if (static_cast<int>(algorithms.size()) != game.num_players()) {
    throw std::invalid_argument("SelfPlay: one algorithm per player required");
  }
  const int players = game.num_players();
  Rng rng(seed);

  std::vector<Learner> learners;
  learners.reserve(players);
  for (int i = 0; i < players; ++i) {
    learners.emplace_back(algorithms[i], game.action_counts[i]);
  }

  SelfPlayResult result;
  result.empirical.assign(game.num_profiles(), 0.0);
  result.actions.assign(players, {});
  result.realized_payoff_sums.assign(players, 0.0);

  std::vector<int> profile(players, 0);
  for (long m = 1; m <= n; ++m) {
    for (int i = 0; i < players; ++i) {
      profile[i] = rng.Categorical(learners[i].Play());
      result.actions[i].push_back(profile[i]);
    }
    result.empirical[game.ProfileIndex(profile)] += 1.0;
    std::vector<int> deviated = profile;
    for (int i = 0; i < players; ++i) {
      Vec outcomes(game.action_counts[i]);
      deviated = profile;
      for (int a = 0; a < game.action_counts[i]; ++a) {
        deviated[i] = a;
        outcomes[a] = game.Payoff(i, deviated);
      }
      learners[i].Observe(profile[i], outcomes);
      result.realized_payoff_sums[i] += outcomes[profile[i]];
    }
    if ((m & (m - 1)) == 0 || m == n) {
      JointDistribution q = Scale(result.empirical, 1.0 / m);
      result.checkpoints.push_back(m);
      result.hannan_series.push_back(HannanViolation(game, q));
      result.correlated_series.push_back(CorrelatedViolation(game, q));
    }
  }
  if (n > 0) {
    result.empirical = Scale(result.empirical, 1.0 / n);
  }
  return result;
}

ZeroSumOptimalityResult ZeroSumOptimality(const NPlayerGame& game,
                                          const SelfPlayResult& play) {
  CheckNPlayerGame(game);
  if (game.num_players() != 2) {
    throw std::invalid_argument("ZeroSumOptimality: two players required");
  }
  for (long s = 0; s < game.num_profiles(); ++s) {
    if (std::abs(game.payoffs[0][s] + game.payoffs[1][s]) > 1e-12) {
      throw std::invalid_argument(
          "ZeroSumOptimality: payoffs are not zero-sum");
    }
  }
  ScalarGame row_game;
  row_game.rho.assign(game.action_counts[0], Vec(game.action_counts[1], 0.0));
  for (int a = 0; a < game.action_counts[0]; ++a) {
    for (int b = 0; b < game.action_counts[1]; ++b) {
      row_game.rho[a][b] = game.payoffs[0][game.ProfileIndex({a, b})];
    }
  }

  ZeroSumOptimalityResult result;
  result.value = Solve(row_game).value;

  const long n = static_cast<long>(play.actions[0].size());
  MixedAction row_marginal(game.action_counts[0], 0.0);
  MixedAction col_marginal(game.action_counts[1], 0.0);
  double payoff_sum = 0.0;
  long next_checkpoint = 1;
  for (long m = 1; m <= n; ++m) {
    const int a = play.actions[0][m - 1];
    const int b = play.actions[1][m - 1];
    row_marginal[a] += 1.0;
    col_marginal[b] += 1.0;
    payoff_sum += row_game.rho[a][b];
    if (m == next_checkpoint || m == n) {
      result.checkpoints.push_back(m);
      result.value_gaps.push_back(std::abs(payoff_sum / m - result.value));
      next_checkpoint *= 2;
    }
  }
  if (n > 0) {
    row_marginal = Scale(row_marginal, 1.0 / n);
    col_marginal = Scale(col_marginal, 1.0 / n);
    const auto gaps = Exploitability(row_game, row_marginal, col_marginal);
    result.row_exploitability = gaps.row_gap;
    result.col_exploitability = gaps.col_gap;
  }
  return result;
}

CbrResult CalibratedBestResponse(const CbrConfig& config,
                                 const std::function<double(long)>& nature,
                                 long n, std::uint64_t seed) {
  const Grid& grid = config.nature_grid;
  if (grid.size() == 0) {
    throw std::invalid_argument("CalibratedBestResponse: empty grid");
  }
  // Precompute the per-cell best reply among the candidates.
  std::vector<double> replies(grid.size());
  for (int l = 0; l < grid.size(); ++l) {
    const double b = grid.reduced_points[l][0];
    double best_value = -std::numeric_limits<double>::infinity();
    for (double a : config.action_candidates) {
      const double v = config.evaluation(a, b);
      if (v > best_value) {
        best_value = v;
        replies[l] = a;
      }
    }
  }

  GridForecaster forecaster(grid);
  Rng rng(seed);
  std::vector<long> counts(grid.size(), 0);
  Vec nature_sums(grid.size(), 0.0);
  double action_sum = 0.0, nature_total = 0.0;

  CbrResult result;
  auto record = [&](long m) {
    double internal = -std::numeric_limits<double>::infinity();
    for (int l = 0; l < grid.size(); ++l) {
      if (counts[l] == 0) continue;
      const double b_avg = nature_sums[l] / counts[l];
      double best_value = -std::numeric_limits<double>::infinity();
      for (double a : config.action_candidates) {
        best_value = std::max(best_value, config.evaluation(a, b_avg));
      }
      const double gap =
          best_value - config.evaluation(replies[l], b_avg) - config.eps;
      internal = std::max(internal,
                          static_cast<double>(counts[l]) / m * gap);
    }
    const double a_avg = action_sum / m;
    const double b_avg = nature_total / m;
    double best_value = -std::numeric_limits<double>::infinity();
    for (double a : config.action_candidates) {
      best_value = std::max(best_value, config.evaluation(a, b_avg));
    }
    result.checkpoints.push_back(m);
    result.internal_scores.push_back(internal);
    result.external_scores.push_back(best_value -
                                     config.evaluation(a_avg, b_avg));
  };

  for (long m = 1; m <= n; ++m) {
    const MixedAction dist = forecaster.NextCellDistribution();
    const double b = nature(m - 1);
    const int cell = rng.Categorical(dist);
    forecaster.Observe(cell, Vec{b});
    ++counts[cell];
    nature_sums[cell] += b;
    action_sum += replies[cell];
    nature_total += b;
    if ((m & (m - 1)) == 0 || m == n) record(m);
  }
  return result;
}

}  // namespace approachlab

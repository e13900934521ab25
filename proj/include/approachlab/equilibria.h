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

#ifndef APPROACHLAB_EQUILIBRIA_H_
#define APPROACHLAB_EQUILIBRIA_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "approachlab/calibration.h"
#include "approachlab/regret.h"
#include "approachlab/zerosum.h"

namespace approachlab {

// A finite game among several players; payoff tensors are flat, profiles
// indexed row-major with the first player's action varying slowest.
struct NPlayerGame {
  std::vector<int> action_counts;
  std::vector<Vec> payoffs;  // one flat tensor per player

  int num_players() const { return static_cast<int>(action_counts.size()); }
  long num_profiles() const;
  long ProfileIndex(const std::vector<int>& profile) const;
  double Payoff(int player, const std::vector<int>& profile) const;

  static NPlayerGame TwoPlayer(const ScalarGame& row_payoffs,
                               const ScalarGame& col_payoffs);
  static NPlayerGame ZeroSumTwoPlayer(const ScalarGame& row_payoffs);
};
void CheckNPlayerGame(const NPlayerGame& game);

// A probability tensor over action profiles.
using JointDistribution = Vec;
void CheckJointDistribution(const NPlayerGame& game,
                            const JointDistribution& q);

// Per player, max_{a*} rho_i(a*, q_{-i}) - rho_i(q); nonpositive exactly on
// the player's Hannan set.
Vec HannanViolation(const NPlayerGame& game, const JointDistribution& q);

// Per player, max over (a, a*) of the q-weighted gain of deviating from the
// recommendation a to a*; nonpositive for correlated equilibria.
Vec CorrelatedViolation(const NPlayerGame& game, const JointDistribution& q);

enum class SelfPlayAlgorithm { kRegretMatching, kExpWeights, kInternal };

struct SelfPlayResult {
  JointDistribution empirical;            // realized profile frequencies
  std::vector<std::vector<int>> actions;  // per player, per stage
  Vec realized_payoff_sums;               // per player
  std::vector<long> checkpoints;          // powers of two up to n
  std::vector<Vec> hannan_series;         // per checkpoint, per player
  std::vector<Vec> correlated_series;     // per checkpoint, per player
};

// Every player independently runs its algorithm on outcome vectors evaluated
// against the opponents' realized actions; violations of the empirical joint
// distribution are recorded at every power of two.
SelfPlayResult SelfPlay(const NPlayerGame& game,
                        const std::vector<SelfPlayAlgorithm>& algorithms,
                        long n, std::uint64_t seed);

struct ZeroSumOptimalityResult {
  double value = 0.0;
  double row_exploitability = 0.0;
  double col_exploitability = 0.0;
  std::vector<long> checkpoints;
  std::vector<double> value_gaps;  // | average payoff - value |
};

// Convergence of self-play marginals to optimal strategies in a zero-sum
// game. Requires the second payoff tensor to be the negation of the first.
ZeroSumOptimalityResult ZeroSumOptimality(const NPlayerGame& game,
                                          const SelfPlayResult& play);

// Calibrated best response for a continuous evaluation on [0,1]^2: a grid
// forecaster tracks Nature's play, and each cell plays a fixed best reply
// among the candidates. The conditional regret beyond eps vanishes even when
// plain external regret cannot.
struct CbrConfig {
  std::function<double(double a, double b)> evaluation;
  Vec action_candidates;
  Grid nature_grid;  // 1-d regular grid over [0, 1]
  double eps = 0.0;
};

struct CbrResult {
  std::vector<long> checkpoints;
  std::vector<double> internal_scores;  // conditional regret beyond eps
  std::vector<double> external_scores;  // G-regret of the running averages
};

CbrResult CalibratedBestResponse(const CbrConfig& config,
                                 const std::function<double(long)>& nature,
                                 long n, std::uint64_t seed);

}  // namespace approachlab

#endif  // APPROACHLAB_EQUILIBRIA_H_

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

#ifndef APPROACHLAB_REGRET_H_
#define APPROACHLAB_REGRET_H_

#include <optional>
#include <utility>
#include <vector>

#include "approachlab/engine.h"
#include "approachlab/geometry.h"
#include "approachlab/invariant.h"
#include "approachlab/zerosum.h"

namespace approachlab {

// A finite family of action-transformation maps phi: A -> A.
struct SwapFamily {
  int num_actions = 0;
  std::vector<std::vector<int>> maps;

  int size() const { return static_cast<int>(maps.size()); }
  // max_a |{phi : phi(a) != a}|.
  int MaxSwapCount() const;

  // Constant maps a -> a*.
  static SwapFamily External(int num_actions);
  // Single-point swaps phi_{a',a*} with phi(a') = a*, identity elsewhere,
  // for every ordered pair a' != a*.
  static SwapFamily Internal(int num_actions);
};

// The 0/1 matrix of shape |family| x A^2 with entry 1 at (phi, (a, a'))
// when phi(a) = a'; the family regret vector equals this matrix applied to
// the flattened pairwise regret matrix.
Matrix FamilyIncidence(const SwapFamily& family);

// Cumulative regret accounting. The pairwise matrix stores, in row a, the
// gains of switching the stages where a was played; its column sums give the
// external vector.
struct RegretState {
  int num_actions = 0;
  long stage = 0;
  Vec external_sum;          // R^A
  Matrix pairwise_sum;       // A x A
  std::optional<SwapFamily> family;
  Vec family_sum;            // R^|family|, tracked when a family is attached

  explicit RegretState(int num_actions_in, std::optional<SwapFamily> fam = {});

  Vec ExternalAverage() const;
  Matrix PairwiseAverage() const;
  Vec FamilyAverage() const;
};

// Accounts one stage: the played action and the full outcome vector
// U[a'] = payoff a' would have received.
void UpdateRegret(RegretState* state, int played, const Vec& outcomes);
// Expected-form update weighted by the mixed action actually played.
void UpdateRegretExpected(RegretState* state, const MixedAction& played,
                          const Vec& outcomes);

// Play proportionally to the positive part of the external regret; uniform
// when no component is positive.
MixedAction RegretMatchingStep(const Vec& external_regret);

// Softmax with max-subtraction.
MixedAction Softmax(const Vec& values, double eta);

// Exponential weights on average outcomes with the stage-dependent rate
// sqrt(8 n log A).
MixedAction ExpWeightsStep(const Vec& average_outcomes, long stage);
double ExpWeightsRate(int num_actions, long stage);

// Projected ascent step x + eta * U onto the simplex.
MixedAction OgdStep(const MixedAction& x, const Vec& outcomes, double eta);

// Theta(M)[a][a'] = sum of M over maps sending a to a'.
Matrix ThetaMatrix(const Vec& family_values, const SwapFamily& family);

// An invariant measure of a nonnegative matrix (uniform for the zero
// matrix); thin wrapper so regret callers can warm start.
MixedAction InvariantStep(const Matrix& nonneg,
                          const MixedAction* warm_start = nullptr);

// Stationary point of p = sum_phi theta^phi p o phi^{-1}: the fixed point of
// the column-stochastic transport built from theta.
MixedAction ExtToPhiStep(const MixedAction& theta, const SwapFamily& family,
                         const MixedAction* warm_start = nullptr);

// Lift of l-infinity external-regret minimization to approachability:
// payoff (U^a, U) in R^{A+1} against {(z, V): z >= max_a V^a} within the
// unit box. The positive-part sup-norm regret of the running average is
// sandwiched between d and sqrt(2) d.
struct LinfRegretLift {
  int num_actions = 0;
  ConvexTarget target;
};
LinfRegretLift MakeLinfRegretLift(int num_actions);
Vec LinfLiftPayoff(int played, const Vec& outcomes);

// Euclidean projection onto the unit ball.
Vec UnitBallProject(const Vec& v);

// Direction-learning approachability of the singleton {0}: ascend
// <theta, payoff> over the unit ball, then play an eps-optimal minimizing
// strategy of the projected game <theta, g(a, b)>.
class RegretDrivenApproachStrategy : public Strategy {
 public:
  explicit RegretDrivenApproachStrategy(VectorGame game);
  MixedAction Next(const HistoryView& view) override;
  void Reset() override;
  const Vec& direction() const { return theta_; }

 private:
  VectorGame game_;
  Vec theta_;
};

// --- Engine strategies ------------------------------------------------------

class RegretMatchingStrategy : public Strategy {
 public:
  explicit RegretMatchingStrategy(ScalarGame payoffs);
  MixedAction Next(const HistoryView& view) override;
  void Reset() override;
  const RegretState& state() const { return state_; }

 private:
  void Absorb(const HistoryView& view);
  ScalarGame payoffs_;
  RegretState state_;
};

class ExpWeightsStrategy : public Strategy {
 public:
  explicit ExpWeightsStrategy(ScalarGame payoffs);
  MixedAction Next(const HistoryView& view) override;
  void Reset() override;

 private:
  ScalarGame payoffs_;
  Vec outcome_sum_;
  long stage_ = 0;
};

class OgdStrategy : public Strategy {
 public:
  explicit OgdStrategy(ScalarGame payoffs);
  MixedAction Next(const HistoryView& view) override;
  void Reset() override;

 private:
  ScalarGame payoffs_;
  MixedAction iterate_;
  int block_ = 0;
  long stage_in_block_ = 0;
};

// Plays an invariant measure of the positive-part pairwise regret matrix.
class InternalRegretStrategy : public Strategy {
 public:
  explicit InternalRegretStrategy(ScalarGame payoffs);
  MixedAction Next(const HistoryView& view) override;
  void Reset() override;
  const RegretState& state() const { return state_; }

 private:
  ScalarGame payoffs_;
  RegretState state_;
  MixedAction last_play_;
};

// Plays an invariant measure of Theta over the family regret.
class PhiRegretStrategy : public Strategy {
 public:
  PhiRegretStrategy(ScalarGame payoffs, SwapFamily family);
  MixedAction Next(const HistoryView& view) override;
  void Reset() override;
  const RegretState& state() const { return state_; }

 private:
  ScalarGame payoffs_;
  RegretState state_;
  MixedAction last_play_;
};

// External regret minimization (regret matching) over the family in the
// auxiliary game, converted to an action distribution through the fixed
// point transport.
class ExtToPhiStrategy : public Strategy {
 public:
  ExtToPhiStrategy(ScalarGame payoffs, SwapFamily family);
  MixedAction Next(const HistoryView& view) override;
  void Reset() override;

 private:
  ScalarGame payoffs_;
  SwapFamily family_;
  Vec family_regret_sum_;
  MixedAction last_play_;
};

// Nature that best-responds against the player's last mixed action,
// minimizing the player's payoff.
class BestResponseNature : public NatureStrategy {
 public:
  explicit BestResponseNature(ScalarGame payoffs)
      : payoffs_(std::move(payoffs)) {}
  int Next(const HistoryView& view, Rng* rng) override;

 private:
  ScalarGame payoffs_;
};

}  // namespace approachlab

#endif  // APPROACHLAB_REGRET_H_

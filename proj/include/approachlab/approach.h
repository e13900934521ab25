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

#ifndef APPROACHLAB_APPROACH_H_
#define APPROACHLAB_APPROACH_H_

#include <cstdint>
#include <functional>
#include <utility>

#include "approachlab/engine.h"
#include "approachlab/geometry.h"
#include "approachlab/zerosum.h"

namespace approachlab {

struct ApproachConfig {
  VectorGame game;
  ConvexTarget target;
  MixedAction fallback;  // played when the average is already in the target
  bool restrict_to_hull = false;

  ApproachConfig(VectorGame g, ConvexTarget t)
      : game(std::move(g)),
        target(std::move(t)),
        fallback(UniformAction(game.A())) {}
};

// (norm bound + target norm bound)^2, the constant governing the
// expected-distance rate sqrt(kappa/n). The target norm bound is a closed
// form upper bound on sup{||z||: z in target, ||z|| <= ||g||}; with
// restrict_to_hull it is refined by projected-gradient ascent over
// target-intersect-hull started from every hull vertex, with headroom folded
// in so kappa is never underestimated.
double Kappa(const ApproachConfig& config);

struct ApproachCheck {
  // max over the Nature grid of min_x d_target(g(x, y)).
  double delta_hat = 0.0;
  MixedAction witness_y;
  // Lipschitz slack of the grid: the supremum over all of Nature's mixed
  // actions is at most delta_hat + grid_slack.
  double grid_slack = 0.0;
};

// Grid check of the dual approachability characterization: the target is
// approachable iff for every y there is an x with g(x, y) in the target,
// i.e. iff delta_hat vanishes (exact verification is NP-hard, hence the
// grid). Requires B <= 4. The inner minimum over x is the distance between
// the target and the polytope {g(x, y)}, solved by alternating projections
// to 1e-6.
ApproachCheck CheckApproachable(const VectorGame& game,
                                const ConvexTarget& target, int resolution);

// One step of Blackwell's strategy: project the running average onto the
// target, then play an optimal mixed action of the zero-sum game projected
// along the outward normal. Falls back to config.fallback when the average
// is already in the target (within 1e-9).
MixedAction BlackwellStep(const ApproachConfig& config, const Point& avg);

class BlackwellStrategy : public Strategy {
 public:
  explicit BlackwellStrategy(ApproachConfig config)
      : config_(std::move(config)) {}
  MixedAction Next(const HistoryView& view) override;
  void Reset() override {}

 private:
  ApproachConfig config_;
};

// Transform of a d-dimensional game with a Box target into the equivalent
// 2d-dimensional game whose target is the negative orthant: coordinates
// (g_k - upper_k, lower_k - g_k). The l-infinity distances agree.
VectorGame BoxToOrthantGame(const VectorGame& game, const ConvexTarget& box);

// State of the softmax-potential strategy with the doubling schedule:
// within block k the learning rate is sqrt(log(dim)/2^k) and the cumulative
// payoff resets at block boundaries.
struct PotentialState {
  int dim = 0;  // transformed coordinate count (2d for a d-dimensional box)
  Vec payoff_total;
  int block = 0;
  long stage_in_block = 0;
  double eta = 0.0;

  explicit PotentialState(int transformed_dim);
  long BlockLength() const { return 1L << block; }
  void Observe(const Vec& transformed_payoff);
};

// Softmax weights over the transformed coordinates for the current state.
Vec PotentialWeights(const PotentialState& state);

// Plays an eps-optimal strategy of the scalar game <weights, h(a, b)> where
// h is the orthant-transformed payoff.
MixedAction PotentialLinfStep(const PotentialState& state,
                              const VectorGame& transformed_game);

class PotentialLinfStrategy : public Strategy {
 public:
  // The target must be a Box over the game's payoff dimension.
  PotentialLinfStrategy(const VectorGame& game, const ConvexTarget& box);
  MixedAction Next(const HistoryView& view) override;
  void Reset() override;

 private:
  VectorGame transformed_;
  PotentialState state_;
};

struct LiftedGame {
  VectorGame game;
  ConvexTarget target;
};

// Weighted-duration lift: payoff (w(a,b) g(a,b), w(a,b)) in R^{d+1} against
// the cone {(z, w): z / w in target, w in [low, high]}. The duration must
// map into [low, high] inside (0, 1].
LiftedGame LiftWeighted(const VectorGame& game,
                        const std::function<double(int, int)>& duration,
                        double low, double high, const ConvexTarget& target);

// Activation lift: payoff (chi^k g^k, chi) in R^{2d} against the
// per-coordinate cone over a Box target containing the origin. The
// activation must map into {0,1}^d.
LiftedGame LiftActivation(const VectorGame& game,
                          const std::function<Vec(int, int)>& activation,
                          const ConvexTarget& box_target);

// The classic two-phase horizon-N demonstration on the 2x2 game with payoffs
// (1,0),(1,1),(0,0),(0,0): play the top row for N stages, then commit to top
// or bottom for N more depending on Nature's first-phase majority. The
// terminal average lands in the union
//   {(1/2, y): y in [0, 1/4]} u {(1, y): y in [1/4, 1]}
// within 1/N.
struct WeakApproachResult {
  double distance = 0.0;
  Vec terminal_average;
};
WeakApproachResult WeakApproachDemo(long n_phase, NatureStrategy* nature,
                                    std::uint64_t seed = 0);
VectorGame WeakApproachGame();
double WeakApproachTargetDistance(const Vec& z);

}  // namespace approachlab

#endif  // APPROACHLAB_APPROACH_H_

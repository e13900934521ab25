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

#include "approachlab/approach.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace approachlab {
namespace {

std::vector<Point> HullVertices(const VectorGame& game) {
  std::vector<Point> vertices;
  vertices.reserve(game.A() * game.B());
  for (int a = 0; a < game.A(); ++a) {
    for (int b = 0; b < game.B(); ++b) vertices.push_back(game.Payoff(a, b));
  }
  return vertices;
}

// Dykstra's alternating projections onto target intersect hull.
Point ProjectIntersection(const ConvexTarget& target,
                          const std::vector<Point>& vertices, const Point& z) {
  Point x = z;
  Vec p(z.size(), 0.0), q(z.size(), 0.0);
  for (int sweep = 0; sweep < 2000; ++sweep) {
    const Point before = x;
    Point u = Add(x, p);
    Point y = Project(target, u).point;
    p = Sub(u, y);
    Point v = Add(y, q);
    x = PolytopeProject(vertices, v).point;
    q = Sub(v, x);
    if (Dist2(before, x) <= 1e-11 && sweep > 2) break;
  }
  return x;
}

// Multi-start projected-gradient ascent on ||z||^2 over target intersect
// hull; returns the best norm found.
double HullNormAscent(const ConvexTarget& target,
                      const std::vector<Point>& vertices) {
  double best = 0.0;
  for (const Point& start : vertices) {
    Point z = ProjectIntersection(target, vertices, start);
    for (int it = 0; it < 60; ++it) {
      Point pushed = Scale(z, 1.5);
      Point next = ProjectIntersection(target, vertices, pushed);
      if (Norm2(next) <= Norm2(z) + 1e-12) break;
      z = std::move(next);
    }
    best = std::max(best, Norm2(z));
  }
  return best;
}

// All compositions of `resolution` into B nonnegative parts, as mixed
// actions with denominators `resolution`.
void EnumerateGrid(int b_count, int resolution,
                   std::vector<MixedAction>* grid) {
  MixedAction y(b_count, 0.0);
  std::function<void(int, int)> recurse = [&](int index, int remaining) {
    if (index == b_count - 1) {
      y[index] = static_cast<double>(remaining) / resolution;
      grid->push_back(y);
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      y[index] = static_cast<double>(k) / resolution;
      recurse(index + 1, remaining - k);
    }
  };
  recurse(0, resolution);
}

class TwoPhaseStrategy : public Strategy {
 public:
  explicit TwoPhaseStrategy(long n_phase) : n_phase_(n_phase) {}

  MixedAction Next(const HistoryView& view) override {
    if (view.stage < n_phase_) return {1.0, 0.0};
    if (view.stage == n_phase_) {
      const long right_count = (*view.nature_action_counts)[1];
      play_top_ = 2 * right_count > n_phase_;
    }
    return play_top_ ? MixedAction{1.0, 0.0} : MixedAction{0.0, 1.0};
  }
  void Reset() override { play_top_ = true; }

 private:
  long n_phase_;
  bool play_top_ = true;
};

}  // namespace

double Kappa(const ApproachConfig& config) {
  const double gnorm = config.game.NormInfBound();
  double target_norm = std::min(config.target.MaxNormUpperBound(gnorm), gnorm);
  if (config.restrict_to_hull) {
    const double ascent =
        HullNormAscent(config.target, HullVertices(config.game));
    // Five percent headroom plus the projection tolerance folds the
    // ascent's approximation error; never exceeds the closed-form bound.
    target_norm = std::min(target_norm, 1.05 * ascent + 1e-6);
  }
  const double root = gnorm + target_norm;
  return root * root;
}

ApproachCheck CheckApproachable(const VectorGame& game,
                                const ConvexTarget& target, int resolution) {
  if (game.B() > 4) {
    throw std::invalid_argument(
        "CheckApproachable: unsupported, needs B <= 4");
  }
  if (resolution < 2) {
    throw std::invalid_argument("CheckApproachable: resolution must be >= 2");
  }
  CheckDim(Vec(game.dim(), 0.0), target.dim(), "CheckApproachable");

  std::vector<MixedAction> grid;
  EnumerateGrid(game.B(), resolution, &grid);

  ApproachCheck out;
  out.witness_y = grid.front();
  for (const MixedAction& y : grid) {
    std::vector<Point> vertices;
    vertices.reserve(game.A());
    for (int a = 0; a < game.A(); ++a) {
      Vec v(game.dim(), 0.0);
      for (int b = 0; b < game.B(); ++b) Axpy(y[b], game.Payoff(a, b), &v);
      vertices.push_back(std::move(v));
    }
    const double dist = TargetPolytopeDistance(target, vertices, 1e-13).dist;
    if (dist > out.delta_hat) {
      out.delta_hat = dist;
      out.witness_y = y;
    }
  }
  out.grid_slack =
      game.NormInfBound() * static_cast<double>(game.B() - 1) / resolution;
  return out;
}

MixedAction BlackwellStep(const ApproachConfig& config, const Point& avg) {
  CheckDim(avg, config.target.dim(), "BlackwellStep");
  const ProjectionResult proj = Project(config.target, avg);
  if (proj.dist <= 1e-9) return config.fallback;
  const Vec normal = Sub(avg, proj.point);

  // The player minimizes <g(a,b) - pi, normal>, so the row player of the
  // negated matrix maximizes.
  ScalarGame projected;
  projected.rho.assign(config.game.A(), Vec(config.game.B(), 0.0));
  for (int a = 0; a < config.game.A(); ++a) {
    for (int b = 0; b < config.game.B(); ++b) {
      projected.rho[a][b] =
          -(Dot(config.game.Payoff(a, b), normal) - Dot(proj.point, normal));
    }
  }
  return Solve(projected, 1e-9).x;
}

MixedAction BlackwellStrategy::Next(const HistoryView& view) {
  if (view.stage == 0) return config_.fallback;
  return BlackwellStep(config_, *view.cesaro_avg);
}

VectorGame BoxToOrthantGame(const VectorGame& game, const ConvexTarget& box) {
  if (box.kind() != ConvexTarget::Kind::kBox || box.dim() != game.dim()) {
    throw std::invalid_argument("BoxToOrthantGame: unsupported target");
  }
  const int d = game.dim();
  std::vector<Vec> payoffs;
  payoffs.reserve(game.A() * game.B());
  for (int a = 0; a < game.A(); ++a) {
    for (int b = 0; b < game.B(); ++b) {
      const Vec& g = game.Payoff(a, b);
      Vec h(2 * d);
      for (int k = 0; k < d; ++k) {
        h[2 * k] = g[k] - box.upper()[k];
        h[2 * k + 1] = box.lower()[k] - g[k];
      }
      payoffs.push_back(std::move(h));
    }
  }
  return VectorGame(game.A(), game.B(), 2 * d, std::move(payoffs));
}

PotentialState::PotentialState(int transformed_dim)
    : dim(transformed_dim), payoff_total(transformed_dim, 0.0) {
  eta = std::sqrt(std::log(static_cast<double>(dim)) / BlockLength());
}

void PotentialState::Observe(const Vec& transformed_payoff) {
  Axpy(1.0, transformed_payoff, &payoff_total);
  ++stage_in_block;
  if (stage_in_block >= BlockLength()) {
    ++block;
    stage_in_block = 0;
    std::fill(payoff_total.begin(), payoff_total.end(), 0.0);
    eta = std::sqrt(std::log(static_cast<double>(dim)) / BlockLength());
  }
}

Vec PotentialWeights(const PotentialState& state) {
  Vec w(state.dim);
  double max_arg = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < state.dim; ++k) {
    max_arg = std::max(max_arg, state.eta * state.payoff_total[k]);
  }
  double sum = 0.0;
  for (int k = 0; k < state.dim; ++k) {
    w[k] = std::exp(state.eta * state.payoff_total[k] - max_arg);
    sum += w[k];
  }
  for (double& e : w) e /= sum;
  return w;
}

MixedAction PotentialLinfStep(const PotentialState& state,
                              const VectorGame& transformed_game) {
  const Vec w = PotentialWeights(state);
  ScalarGame projected;
  projected.rho.assign(transformed_game.A(), Vec(transformed_game.B(), 0.0));
  for (int a = 0; a < transformed_game.A(); ++a) {
    for (int b = 0; b < transformed_game.B(); ++b) {
      projected.rho[a][b] = -Dot(w, transformed_game.Payoff(a, b));
    }
  }
  return Solve(projected, 1e-9).x;
}

PotentialLinfStrategy::PotentialLinfStrategy(const VectorGame& game,
                                             const ConvexTarget& box)
    : transformed_(BoxToOrthantGame(game, box)), state_(transformed_.dim()) {}

MixedAction PotentialLinfStrategy::Next(const HistoryView& view) {
  if (view.stage > 0) {
    const Vec h = view.last_player_action >= 0
                      ? transformed_.Payoff(view.last_player_action,
                                            view.last_nature_action)
                      : transformed_.Payoff(*view.last_player_mixed,
                                            view.last_nature_action);
    state_.Observe(h);
  }
  return PotentialLinfStep(state_, transformed_);
}

void PotentialLinfStrategy::Reset() { state_ = PotentialState(state_.dim); }

LiftedGame LiftWeighted(const VectorGame& game,
                        const std::function<double(int, int)>& duration,
                        double low, double high, const ConvexTarget& target) {
  if (!(low > 0.0 && low <= high && high <= 1.0)) {
    throw std::invalid_argument("LiftWeighted: range must lie inside (0, 1]");
  }
  const int d = game.dim();
  std::vector<Vec> payoffs;
  payoffs.reserve(game.A() * game.B());
  for (int a = 0; a < game.A(); ++a) {
    for (int b = 0; b < game.B(); ++b) {
      const double w = duration(a, b);
      if (!(w >= low && w <= high)) {
        throw std::invalid_argument("LiftWeighted: duration outside range");
      }
      Vec lifted(d + 1);
      for (int k = 0; k < d; ++k) lifted[k] = w * game.Payoff(a, b)[k];
      lifted[d] = w;
      payoffs.push_back(std::move(lifted));
    }
  }
  return {VectorGame(game.A(), game.B(), d + 1, std::move(payoffs)),
          ConvexTarget::ConeLift(target, low, high)};
}

LiftedGame LiftActivation(const VectorGame& game,
                          const std::function<Vec(int, int)>& activation,
                          const ConvexTarget& box_target) {
  if (box_target.kind() != ConvexTarget::Kind::kBox ||
      box_target.dim() != game.dim()) {
    throw std::invalid_argument("LiftActivation: unsupported target");
  }
  const int d = game.dim();
  std::vector<Vec> payoffs;
  payoffs.reserve(game.A() * game.B());
  for (int a = 0; a < game.A(); ++a) {
    for (int b = 0; b < game.B(); ++b) {
      const Vec chi = activation(a, b);
      CheckDim(chi, d, "LiftActivation");
      Vec lifted(2 * d);
      for (int k = 0; k < d; ++k) {
        if (chi[k] != 0.0 && chi[k] != 1.0) {
          throw std::invalid_argument(
              "LiftActivation: activation values must be 0 or 1");
        }
        lifted[k] = chi[k] * game.Payoff(a, b)[k];
        lifted[d + k] = chi[k];
      }
      payoffs.push_back(std::move(lifted));
    }
  }
  return {VectorGame(game.A(), game.B(), 2 * d, std::move(payoffs)),
          ConvexTarget::ConeLiftPerCoordinate(box_target)};
}

VectorGame WeakApproachGame() {
  return VectorGame::FromTensor({
      {{1.0, 0.0}, {1.0, 1.0}},
      {{0.0, 0.0}, {0.0, 0.0}},
  });
}

double WeakApproachTargetDistance(const Vec& z) {
  const auto left = ConvexTarget::Box({0.5, 0.0}, {0.5, 0.25});
  const auto right = ConvexTarget::Box({1.0, 0.25}, {1.0, 1.0});
  return std::min(Distance(left, z), Distance(right, z));
}

WeakApproachResult WeakApproachDemo(long n_phase, NatureStrategy* nature,
                                    std::uint64_t seed) {
  if (n_phase < 2 || n_phase % 2 != 0) {
    throw std::invalid_argument("WeakApproachDemo: N must be even and >= 2");
  }
  const VectorGame game = WeakApproachGame();
  TwoPhaseStrategy player(n_phase);
  const Transcript t = RunEpisode(game, &player, nature, 2 * n_phase, seed);
  WeakApproachResult out;
  out.terminal_average = t.CesaroAverage();
  out.distance = WeakApproachTargetDistance(out.terminal_average);
  return out;
}

}  // namespace approachlab

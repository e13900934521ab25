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

#include "approachlab/verify.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "approachlab/approach.h"
#include "approachlab/calibration.h"
#include "approachlab/engine.h"
#include "approachlab/equilibria.h"
#include "approachlab/geometry.h"
#include "approachlab/invariant.h"
#include "approachlab/regret.h"
#include "approachlab/zerosum.h"

namespace approachlab {
namespace {

constexpr int kSeeds = 200;

std::string Fmt(double v) {
  std::ostringstream out;
  out.precision(5);
  out << v;
  return out.str();
}

ScalarGame RandomScalarGame(std::mt19937& gen, int rows, int cols) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ScalarGame game;
  game.rho.assign(rows, Vec(cols, 0.0));
  for (Vec& row : game.rho) {
    for (double& v : row) v = unit(gen);
  }
  return game;
}

VectorGame RandomVectorGame(std::mt19937& gen, int a, int b, int dim) {
  std::uniform_real_distribution<double> range(-1.0, 1.0);
  std::vector<Vec> payoffs(a * b, Vec(dim, 0.0));
  for (Vec& g : payoffs) {
    for (double& v : g) v = range(gen);
  }
  return VectorGame(a, b, dim, std::move(payoffs));
}

MixedAction RandomMixed(std::mt19937& gen, int n) {
  std::exponential_distribution<double> dist(1.0);
  Vec v(n);
  double sum = 0.0;
  for (double& e : v) {
    e = dist(gen);
    sum += e;
  }
  for (double& e : v) e /= sum;
  return v;
}

// Vector regret game of a scalar game: g(a,b)[k] = rho(k,b) - rho(a,b).
VectorGame RegretVectorGame(const ScalarGame& rho) {
  std::vector<Vec> payoffs;
  payoffs.reserve(rho.rows() * rho.cols());
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

// Targets guaranteed approachable: they contain every g(x-hat, y) with a
// margin, for a hidden mixed action x-hat.
ConvexTarget ApproachableBall(const VectorGame& game, std::mt19937& gen) {
  const MixedAction xhat = RandomMixed(gen, game.A());
  Vec center(game.dim(), 0.0);
  for (int b = 0; b < game.B(); ++b) {
    Axpy(1.0 / game.B(), game.Payoff(xhat, b), &center);
  }
  double radius = 0.0;
  for (int b = 0; b < game.B(); ++b) {
    radius = std::max(radius, Dist2(game.Payoff(xhat, b), center));
  }
  return ConvexTarget::Ball(center, radius + 0.01);
}

ConvexTarget ApproachableBox(const VectorGame& game, std::mt19937& gen,
                             bool pure = false, double margin = 0.01) {
  MixedAction xhat(game.A(), 0.0);
  if (pure) {
    xhat[0] = 1.0;
  } else {
    xhat = RandomMixed(gen, game.A());
  }
  Vec lo(game.dim(), 1e9), hi(game.dim(), -1e9);
  for (int b = 0; b < game.B(); ++b) {
    const Vec g = game.Payoff(xhat, b);
    for (int k = 0; k < game.dim(); ++k) {
      lo[k] = std::min(lo[k], g[k] - margin);
      hi[k] = std::max(hi[k], g[k] + margin);
    }
  }
  return ConvexTarget::Box(std::move(lo), std::move(hi));
}

CriterionResult MakeResult(const std::string& name, double observed,
                           double threshold, bool pass,
                           const std::string& details) {
  CriterionResult r;
  r.name = name;
  r.pass = pass;
  r.observed = observed;
  r.threshold = threshold;
  r.details = details;
  return r;
}

// Upper-bound style criterion: pass when observed <= threshold everywhere;
// observed is reported as the worst ratio times its threshold.
struct BoundTracker {
  double worst_ratio = 0.0;
  double worst_observed = 0.0;
  double worst_threshold = 0.0;
  std::ostringstream details;
  bool pass = true;

  void Add(const std::string& label, double observed, double threshold) {
    const double ratio = observed / threshold;
    if (ratio >= worst_ratio) {
      worst_ratio = ratio;
      worst_observed = observed;
      worst_threshold = threshold;
    }
    if (observed > threshold) pass = false;
    if (details.tellp() > 0) details << ", ";
    details << label << "=" << Fmt(observed) << "<=" << Fmt(threshold);
  }

  CriterionResult Result(const std::string& name) const {
    return MakeResult(name, worst_observed, worst_threshold, pass,
                      details.str());
  }
};

// --- criterion 1 -------------------------------------------------------------

CriterionResult Criterion1Lln() {
  const VectorGame coin = VectorGame::FromTensor({{{-1.0}}, {{+1.0}}});
  const std::vector<long> checkpoints = {10, 100, 1000};
  auto trial = [&coin, &checkpoints](std::uint64_t seed) {
    FixedStrategy player(MixedAction{0.5, 0.5});
    FixedNature nature(0);
    const Transcript t = RunEpisode(coin, &player, &nature, 1000, seed);
    std::vector<double> values;
    Vec sum(1, 0.0);
    std::size_t next = 0;
    for (long m = 1; m <= t.length(); ++m) {
      sum[0] += t.stages[m - 1].payoff[0];
      if (next < checkpoints.size() && m == checkpoints[next]) {
        const double avg = sum[0] / m;
        values.push_back(avg * avg);
        ++next;
      }
    }
    return values;
  };
  const int trials = 10000;
  const auto mc = MonteCarlo(trials, 1, 3, trial);
  bool pass = true;
  double worst_gap = 0.0, worst_allowed = 1.0;
  std::ostringstream details;
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    const double expected = 1.0 / checkpoints[c];
    const double se = mc.stddev[c] / std::sqrt(static_cast<double>(trials));
    const double gap = std::abs(mc.mean[c] - expected);
    if (gap > 3.0 * se) pass = false;
    if (gap / (3.0 * se) > worst_gap / worst_allowed) {
      worst_gap = gap;
      worst_allowed = 3.0 * se;
    }
    details << "n=" << checkpoints[c] << ": mean=" << Fmt(mc.mean[c])
            << " target=" << Fmt(expected) << " 3se=" << Fmt(3.0 * se) << "; ";
  }
  return MakeResult("1 law-of-large-numbers identity", worst_gap,
                    worst_allowed, pass, details.str());
}

// --- criteria 2-4, 11 --------------------------------------------------------

std::vector<double> DistanceCheckpoints(const VectorGame& game,
                                        Strategy* player,
                                        NatureStrategy* nature,
                                        const ConvexTarget& target, long n,
                                        const std::vector<long>& checkpoints,
                                        std::uint64_t seed, bool sup_norm) {
  const Transcript t = RunEpisode(game, player, nature, n, seed);
  std::vector<double> out;
  Vec sum(game.dim(), 0.0);
  std::size_t next = 0;
  for (long m = 1; m <= n; ++m) {
    Axpy(1.0, t.stages[m - 1].payoff, &sum);
    if (next < checkpoints.size() && m == checkpoints[next]) {
      const Vec avg = Scale(sum, 1.0 / m);
      out.push_back(sup_norm ? LinfDistance(target, avg)
                             : Distance(target, avg));
      ++next;
    }
  }
  return out;
}

CriterionResult Criterion2BlackwellRate() {
  std::mt19937 gen(20260810);
  const std::vector<long> checkpoints = {100, 1000, 10000};
  BoundTracker tracker;
  struct Config {
    int a, b, d;
    bool ball;
  };
  const std::vector<Config> configs = {{3, 3, 2, true},
                                       {4, 2, 3, false},
                                       {2, 4, 2, true}};
  int index = 0;
  for (const Config& cfg : configs) {
    const VectorGame game = RandomVectorGame(gen, cfg.a, cfg.b, cfg.d);
    const ConvexTarget target =
        cfg.ball ? ApproachableBall(game, gen) : ApproachableBox(game, gen);
    const auto check = CheckApproachable(game, target, 8);
    if (check.delta_hat > 1e-6) {
      return MakeResult("2 expected-distance rate of Blackwell strategy",
                        check.delta_hat, 1e-6, false,
                        "constructed target failed the approachability check");
    }
    ApproachConfig approach(game, target);
    const double kappa = Kappa(approach);
    const MixedAction law = RandomMixed(gen, game.B());
    auto trial = [&](std::uint64_t seed) {
      BlackwellStrategy player(approach);
      IidNature nature(law);
      return DistanceCheckpoints(game, &player, &nature, target, 10000,
                                 checkpoints, seed, false);
    };
    const auto mc = MonteCarlo(kSeeds, 1000 + index * kSeeds, 3, trial);
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
      tracker.Add("g" + std::to_string(index) + "/n" +
                      std::to_string(checkpoints[c]),
                  mc.mean[c], std::sqrt(kappa / checkpoints[c]));
    }
    ++index;
  }
  return tracker.Result("2 expected-distance rate of Blackwell strategy");
}

CriterionResult Criterion3ConeRate() {
  std::mt19937 gen(1003);
  const std::vector<long> checkpoints = {100, 1000, 10000};
  BoundTracker tracker;
  for (const int a_count : {3, 4}) {
    const ScalarGame rho = RandomScalarGame(gen, a_count, 3);
    const VectorGame game = RegretVectorGame(rho);
    const ConvexTarget target = ConvexTarget::NegativeOrthant(a_count);
    ApproachConfig approach(game, target);
    const double gnorm = game.NormInfBound();
    const MixedAction law = RandomMixed(gen, game.B());
    auto trial = [&](std::uint64_t seed) {
      BlackwellStrategy player(approach);
      IidNature nature(law);
      return DistanceCheckpoints(game, &player, &nature, target, 10000,
                                 checkpoints, seed, false);
    };
    const auto mc = MonteCarlo(kSeeds, 2000 + a_count * kSeeds, 3, trial);
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
      tracker.Add("A" + std::to_string(a_count) + "/n" +
                      std::to_string(checkpoints[c]),
                  mc.mean[c], gnorm / std::sqrt(checkpoints[c]));
    }
  }
  return tracker.Result("3 cone-target rate of Blackwell strategy");
}

// Stacked column-permuted cyclic games: every coordinate is the 3x3 cyclic
// payoff with its columns shifted, so only the uniform action keeps every
// column payoff at the origin. A small box around the origin is approachable
// but forces the strategy to track it actively.
VectorGame CyclicStackGame(int dim) {
  const double cyclic[3][3] = {
      {0.0, -1.0, 1.0}, {1.0, 0.0, -1.0}, {-1.0, 1.0, 0.0}};
  std::vector<Vec> payoffs;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      Vec g(dim);
      for (int k = 0; k < dim; ++k) g[k] = cyclic[a][(b + k) % 3];
      payoffs.push_back(std::move(g));
    }
  }
  return VectorGame(3, 3, dim, std::move(payoffs));
}

CriterionResult Criterion4PotentialRate() {
  std::vector<long> checkpoints;
  for (int k = 7; k <= 14; ++k) checkpoints.push_back(1L << k);
  BoundTracker tracker;
  std::mt19937 gen(1004);
  for (const int dim : {2, 4}) {
    const VectorGame game = CyclicStackGame(dim);
    const ConvexTarget box =
        ConvexTarget::Box(Vec(dim, -0.1), Vec(dim, 0.1));
    const MixedAction law = RandomMixed(gen, game.B());
    auto trial = [&](std::uint64_t seed) {
      PotentialLinfStrategy player(game, box);
      IidNature nature(law);
      return DistanceCheckpoints(game, &player, &nature, box, 1L << 14,
                                 checkpoints, seed, true);
    };
    const auto mc =
        MonteCarlo(kSeeds, 3000 + dim * kSeeds, checkpoints.size(), trial);
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
      tracker.Add(
          "d" + std::to_string(dim) + "/n" + std::to_string(checkpoints[c]),
          mc.mean[c],
          14.0 * std::sqrt(std::log(2.0 * dim) / checkpoints[c]));
    }
  }
  return tracker.Result("4 sup-norm potential rate");
}

CriterionResult Criterion11WeakApproach() {
  bool pass = true;
  double worst = 0.0, worst_bound = 1.0;
  std::ostringstream details;
  for (const long n_phase : {10L, 100L, 1000L}) {
    double config_worst = 0.0;
    for (int which = 0; which < 5; ++which) {
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::unique_ptr<NatureStrategy> nature;
        switch (which) {
          case 0:
            nature = std::make_unique<FixedNature>(0);
            break;
          case 1:
            nature = std::make_unique<FixedNature>(1);
            break;
          case 2:
            nature = std::make_unique<IidNature>(MixedAction{0.5, 0.5});
            break;
          case 3:
            nature = std::make_unique<IidNature>(MixedAction{0.2, 0.8});
            break;
          default:
            nature = std::make_unique<CyclingNature>(std::vector<int>{0, 1});
        }
        const auto result = WeakApproachDemo(n_phase, nature.get(), seed);
        config_worst = std::max(config_worst, result.distance);
        if (which <= 1 || which == 4) break;  // deterministic Natures
      }
    }
    const double bound = 1.0 / n_phase;
    if (config_worst > bound) pass = false;
    if (config_worst / bound > worst / worst_bound) {
      worst = config_worst;
      worst_bound = bound;
    }
    details << "N=" << n_phase << ": max_d=" << Fmt(config_worst)
            << "<=" << Fmt(bound) << "; ";
  }
  return MakeResult("11 weak-approachability demo", worst, worst_bound, pass,
                    details.str());
}

// --- criteria 5-7, 14 --------------------------------------------------------

struct RegretRun {
  std::vector<double> external_l2;
  std::vector<double> external_sup;
  std::vector<double> pairwise_l2;
  std::vector<double> family_l2;
};

RegretRun RunRegretEpisode(const ScalarGame& rho, Strategy* player,
                           bool adaptive, const MixedAction& law, long n,
                           const std::vector<long>& checkpoints,
                           std::uint64_t seed,
                           const std::optional<SwapFamily>& family) {
  // Embed the scalar game as a 1-d vector game; strategies carry their own
  // payoff tables.
  std::vector<Vec> payoffs;
  for (int a = 0; a < rho.rows(); ++a) {
    for (int b = 0; b < rho.cols(); ++b) payoffs.push_back({rho.rho[a][b]});
  }
  const VectorGame game(rho.rows(), rho.cols(), 1, std::move(payoffs));
  std::unique_ptr<NatureStrategy> nature;
  if (adaptive) {
    nature = std::make_unique<BestResponseNature>(rho);
  } else {
    nature = std::make_unique<IidNature>(law);
  }
  const Transcript t = RunEpisode(game, player, nature.get(), n, seed);

  RegretRun run;
  RegretState state(rho.rows(), family);
  std::size_t next = 0;
  for (long m = 1; m <= n; ++m) {
    const StageRecord& rec = t.stages[m - 1];
    Vec outcomes(rho.rows());
    for (int a = 0; a < rho.rows(); ++a) {
      outcomes[a] = rho.rho[a][rec.nature_action];
    }
    UpdateRegret(&state, rec.player_action, outcomes);
    if (next < checkpoints.size() && m == checkpoints[next]) {
      run.external_l2.push_back(Norm2(PositivePart(state.ExternalAverage())));
      run.external_sup.push_back(
          NormInf(PositivePart(state.ExternalAverage())));
      double sq = 0.0;
      for (const Vec& row : state.PairwiseAverage()) {
        for (double v : row) sq += std::max(v, 0.0) * std::max(v, 0.0);
      }
      run.pairwise_l2.push_back(std::sqrt(sq));
      if (family.has_value()) {
        run.family_l2.push_back(Norm2(PositivePart(state.FamilyAverage())));
      }
      ++next;
    }
  }
  return run;
}

CriterionResult Criterion5ExternalRegret() {
  std::mt19937 gen(1005);
  const std::vector<long> checkpoints = {1000, 4000};
  BoundTracker tracker;
  int base_seed = 4000;
  for (const int a_count : {2, 5}) {
    const ScalarGame rho = RandomScalarGame(gen, a_count, 3);
    const MixedAction law = RandomMixed(gen, 3);
    for (const bool adaptive : {false, true}) {
      auto rm_trial = [&](std::uint64_t seed) {
        RegretMatchingStrategy player(rho);
        return RunRegretEpisode(rho, &player, adaptive, law, 4000,
                                checkpoints, seed, std::nullopt)
            .external_l2;
      };
      auto ew_trial = [&](std::uint64_t seed) {
        ExpWeightsStrategy player(rho);
        return RunRegretEpisode(rho, &player, adaptive, law, 4000,
                                checkpoints, seed, std::nullopt)
            .external_sup;
      };
      const auto rm = MonteCarlo(kSeeds, base_seed, 2, rm_trial);
      const auto ew = MonteCarlo(kSeeds, base_seed + 7, 2, ew_trial);
      base_seed += 2 * kSeeds;
      const std::string tag = "A" + std::to_string(a_count) +
                              (adaptive ? "/adaptive" : "/iid");
      for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        tracker.Add("rm/" + tag + "/n" + std::to_string(checkpoints[c]),
                    rm.mean[c], std::sqrt(a_count * 1.0 / checkpoints[c]));
        tracker.Add("ew/" + tag + "/n" + std::to_string(checkpoints[c]),
                    ew.mean[c],
                    2.0 * std::sqrt(std::log(a_count) / checkpoints[c]));
      }
    }
  }
  return tracker.Result("5 external regret rates");
}

CriterionResult Criterion6InternalRegret() {
  std::mt19937 gen(1006);
  const std::vector<long> checkpoints = {500, 2000};
  BoundTracker tracker;
  int base_seed = 9000;

  const ScalarGame rho3 = RandomScalarGame(gen, 3, 3);
  const MixedAction law3 = RandomMixed(gen, 3);
  for (const bool adaptive : {false, true}) {
    auto trial = [&](std::uint64_t seed) {
      InternalRegretStrategy player(rho3);
      return RunRegretEpisode(rho3, &player, adaptive, law3, 2000, checkpoints,
                              seed, std::nullopt)
          .pairwise_l2;
    };
    const auto mc = MonteCarlo(kSeeds, base_seed, 2, trial);
    base_seed += kSeeds;
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
      tracker.Add(std::string("internal/") + (adaptive ? "adaptive" : "iid") +
                      "/n" + std::to_string(checkpoints[c]),
                  mc.mean[c], std::sqrt(3.0 / checkpoints[c]));
    }
  }

  const ScalarGame rho4 = RandomScalarGame(gen, 4, 3);
  const MixedAction law4 = RandomMixed(gen, 3);
  const SwapFamily family = SwapFamily::External(4);
  auto phi_trial = [&](std::uint64_t seed) {
    PhiRegretStrategy player(rho4, family);
    return RunRegretEpisode(rho4, &player, false, law4, 2000, checkpoints,
                            seed, family)
        .family_l2;
  };
  const auto mc = MonteCarlo(kSeeds, base_seed, 2, phi_trial);
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    tracker.Add("phi/n" + std::to_string(checkpoints[c]), mc.mean[c],
                std::sqrt(family.MaxSwapCount() * 1.0 / checkpoints[c]));
  }
  return tracker.Result("6 internal and family regret rates");
}

CriterionResult Criterion7Orthogonality() {
  std::mt19937 gen(1007);
  double worst = 0.0;
  for (int episode = 0; episode < 20; ++episode) {
    const ScalarGame rho = RandomScalarGame(gen, 3, 3);
    const MixedAction law = RandomMixed(gen, 3);
    Rng rng(500 + episode);
    RegretState state(3);
    for (int m = 0; m < 100; ++m) {
      const MixedAction x = RegretMatchingStep(state.external_sum);
      Matrix positive = state.pairwise_sum;
      for (Vec& row : positive) {
        for (double& v : row) v = std::max(v, 0.0);
      }
      const MixedAction lambda = InvariantStep(positive);
      const int b = rng.Categorical(law);
      Vec outcomes(3);
      for (int a = 0; a < 3; ++a) outcomes[a] = rho.rho[a][b];

      Vec expected_external(3, 0.0);
      for (int a = 0; a < 3; ++a) {
        for (int k = 0; k < 3; ++k) {
          expected_external[k] += x[a] * (outcomes[k] - outcomes[a]);
        }
      }
      worst = std::max(
          worst,
          std::abs(Dot(expected_external, PositivePart(state.external_sum))) /
              std::max(1.0, Norm2(PositivePart(state.external_sum))));

      double pairwise_inner = 0.0;
      for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < 3; ++k) {
          pairwise_inner +=
              positive[i][k] * lambda[i] * (outcomes[k] - outcomes[i]);
        }
      }
      double positive_norm = 0.0;
      for (const Vec& row : positive) positive_norm += Norm2Sq(row);
      worst = std::max(worst, std::abs(pairwise_inner) /
                                  std::max(1.0, std::sqrt(positive_norm)));

      UpdateRegret(&state, rng.Categorical(x), outcomes);
    }
  }
  return MakeResult("7 per-step orthogonality identities", worst, 1e-8,
                    worst <= 1e-8, "max normalized inner product over 20x100 "
                    "stages");
}

CriterionResult Criterion14Reduction() {
  std::mt19937 gen(1014);
  const SwapFamily family = SwapFamily::Internal(3);
  double worst = 0.0;
  int kept = 0;
  int attempts = 0;
  while (kept < 100 && attempts < 2000) {
    ++attempts;
    Rng rng(7000 + attempts);
    RegretState state(3, family);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int length = 40 + attempts % 40;
    for (int m = 0; m < length; ++m) {
      Vec outcomes = {unit(gen), unit(gen), unit(gen)};
      UpdateRegret(&state, rng.Categorical(UniformAction(3)), outcomes);
    }
    Matrix positive = state.pairwise_sum;
    for (Vec& row : positive) {
      for (double& v : row) v = std::max(v, 0.0);
    }
    // Equality of the two constructions is only claimed when the invariant
    // measure is unique.
    if (!IsIrreducible(positive)) continue;
    ++kept;
    const MixedAction direct = InvariantStep(positive);
    const MixedAction composed =
        ExtToPhiStep(RegretMatchingStep(state.family_sum), family);
    for (int a = 0; a < 3; ++a) {
      worst = std::max(worst, std::abs(direct[a] - composed[a]));
    }
  }
  const bool pass = kept == 100 && worst <= 1e-6;
  return MakeResult("14 family-regret reduction identity", worst, 1e-6, pass,
                    "max action-probability gap over " +
                        std::to_string(kept) + " histories");
}

// --- criteria 8-10 -----------------------------------------------------------

// Nature that answers with the outcome given the least mean forecast mass;
// for two outcomes this is exactly the classic defeating rule.
class LeastForecastAdversary : public CalibAdversary {
 public:
  int Outcome(const MixedAction& cell_distribution, const Grid& grid,
              const CalibTranscript&, Rng*) override {
    const std::size_t omega = grid.points[0].size();
    Vec mean(omega, 0.0);
    for (int l = 0; l < grid.size(); ++l) {
      Axpy(cell_distribution[l], grid.points[l], &mean);
    }
    int best = 0;
    for (std::size_t m = 1; m < omega; ++m) {
      if (mean[m] < mean[best] - 1e-15) best = static_cast<int>(m);
    }
    return best;
  }
};

CriterionResult Criterion8GridCalibration() {
  BoundTracker tracker;
  int base_seed = 11000;
  struct Config {
    int omega;
    double eps;
  };
  for (const Config cfg : {Config{2, 0.125}, Config{3, 0.25}}) {
    const Grid grid = MakeRegularGrid(cfg.omega - 1, cfg.eps);
    const double log_l = std::log(static_cast<double>(grid.size()));
    const long n = 4000;
    for (const bool adversarial : {false, true}) {
      auto trial = [&](std::uint64_t seed) {
        GridForecaster forecaster(grid);
        std::unique_ptr<CalibAdversary> adversary;
        if (adversarial) {
          adversary = std::make_unique<LeastForecastAdversary>();
        } else {
          MixedAction law(cfg.omega, 1.0 / cfg.omega);
          law[0] += 0.2;
          law[cfg.omega - 1] -= 0.2;
          adversary = std::make_unique<IidOutcomeAdversary>(law);
        }
        const CalibTranscript t = RunCalibration(
            &forecaster, adversary.get(), grid, cfg.omega, n, seed);
        return std::vector<double>{WeightedCalibScore(t, grid)};
      };
      const auto mc = MonteCarlo(kSeeds, base_seed, 1, trial);
      base_seed += kSeeds;
      tracker.Add("omega" + std::to_string(cfg.omega) +
                      (adversarial ? "/rule" : "/iid"),
                  mc.mean[0], 6.0 * std::sqrt(log_l / n));
    }
  }
  // Weighted variant on the binary grid.
  Grid weighted = MakeRegularGrid(1, 0.125);
  double max_weight = 0.0;
  for (int l = 0; l < weighted.size(); ++l) {
    weighted.weights[l] = (l % 2 == 0) ? 0.08 : -0.08;
    max_weight = std::max(max_weight, std::abs(weighted.weights[l]));
  }
  const long n = 4000;
  auto weighted_trial = [&](std::uint64_t seed) {
    GridForecaster forecaster(weighted);
    LeastForecastAdversary adversary;
    const CalibTranscript t =
        RunCalibration(&forecaster, &adversary, weighted, 2, n, seed);
    return std::vector<double>{WeightedCalibScore(t, weighted)};
  };
  const auto mc = MonteCarlo(kSeeds, base_seed, 1, weighted_trial);
  tracker.Add("weighted", mc.mean[0],
              (6.0 + 3.0 * max_weight) *
                  std::sqrt(std::log(static_cast<double>(weighted.size())) / n));
  return tracker.Result("8 grid calibration rate");
}

CriterionResult Criterion9EpsIndependence() {
  BoundTracker tracker;
  const long n = 10000;
  int base_seed = 13000;
  for (const double eps : {0.3, 0.1, 0.05}) {
    const Grid grid = MakeRegularGrid(1, eps);
    auto trial = [&](std::uint64_t seed) {
      NeighborhoodForecaster forecaster(grid);
      LeastForecastAdversary adversary;
      const CalibTranscript t =
          RunCalibration(&forecaster, &adversary, grid, 2, n, seed);
      return std::vector<double>{EpsCellScore(t, grid, eps)};
    };
    const auto mc = MonteCarlo(kSeeds, base_seed, 1, trial);
    base_seed += kSeeds;
    tracker.Add("eps" + Fmt(eps), mc.mean[0], std::sqrt(1.0 / n));
  }
  return tracker.Result("9 eps-independent calibration rate");
}

CriterionResult Criterion10Impossibility() {
  const double eps = 0.1;
  const Grid grid = MakeRegularGrid(1, eps);
  const long n = 10000;

  FrequencyForecaster deterministic(grid);
  OakesDawidAdversary rule;
  const CalibTranscript det =
      RunCalibration(&deterministic, &rule, grid, 2, n, 1);
  const double det_score = EpsCalibrationScore(det, grid, eps);

  auto trial = [&](std::uint64_t seed) {
    GridForecaster forecaster(grid);
    OakesDawidAdversary adversary;
    const CalibTranscript t =
        RunCalibration(&forecaster, &adversary, grid, 2, n, seed);
    return std::vector<double>{WeightedCalibScore(t, grid)};
  };
  const auto mc = MonteCarlo(kSeeds, 15000, 1, trial);
  const double bound =
      6.0 * std::sqrt(std::log(static_cast<double>(grid.size())) / n);

  const bool pass = det_score >= 0.05 && mc.mean[0] <= bound;
  std::ostringstream details;
  details << "deterministic=" << Fmt(det_score) << ">=0.05, randomized="
          << Fmt(mc.mean[0]) << "<=" << Fmt(bound);
  return MakeResult("10 deterministic impossibility witness", det_score, 0.05,
                    pass, details.str());
}

// --- criteria 12-13 ----------------------------------------------------------

CriterionResult Criterion12Equilibria() {
  bool pass = true;
  std::ostringstream details;
  const long n = 10000;

  const std::vector<NPlayerGame> games = {
      NPlayerGame::TwoPlayer({{{1.0, 0.0}, {0.0, 2.0 / 3.0}}},
                             {{{2.0 / 3.0, 0.0}, {0.0, 1.0}}}),
      NPlayerGame::TwoPlayer({{{0.6, 0.2}, {1.0, 0.0}}},
                             {{{0.6, 1.0}, {0.2, 0.0}}}),
      NPlayerGame::TwoPlayer({{{0.6, 0.0}, {1.0, 0.2}}},
                             {{{0.6, 1.0}, {0.0, 0.2}}}),
  };
  double worst_fraction = 1.0;
  for (std::size_t g = 0; g < games.size(); ++g) {
    auto trial = [&games, g, n](std::uint64_t seed) {
      const auto result = SelfPlay(
          games[g],
          {SelfPlayAlgorithm::kInternal, SelfPlayAlgorithm::kInternal}, n,
          seed);
      const Vec& v = result.correlated_series.back();
      return std::vector<double>{std::max(v[0], v[1]) <= 0.05 ? 1.0 : 0.0};
    };
    const auto mc = MonteCarlo(kSeeds, 16000 + g * kSeeds, 1, trial);
    worst_fraction = std::min(worst_fraction, mc.mean[0]);
    if (mc.mean[0] < 0.95) pass = false;
    details << "game" << g << ": " << Fmt(100.0 * mc.mean[0]) << "% below "
            << "0.05; ";
  }

  const NPlayerGame pennies =
      NPlayerGame::ZeroSumTwoPlayer({{{1.0, -1.0}, {-1.0, 1.0}}});
  auto zs_trial = [&pennies, n](std::uint64_t seed) {
    const auto play = SelfPlay(pennies,
                               {SelfPlayAlgorithm::kRegretMatching,
                                SelfPlayAlgorithm::kRegretMatching},
                               n, seed);
    const auto opt = ZeroSumOptimality(pennies, play);
    return std::vector<double>{
        std::max(opt.row_exploitability, opt.col_exploitability)};
  };
  const auto mc = MonteCarlo(kSeeds, 17000, 1, zs_trial);
  const double bound = 4.0 * std::sqrt(2.0 / n);
  if (mc.mean[0] > bound) pass = false;
  details << "zero-sum exploitability mean=" << Fmt(mc.mean[0])
          << "<=" << Fmt(bound);
  return MakeResult("12 equilibrium dynamics", worst_fraction, 0.95, pass,
                    details.str());
}

// Reference projection onto a halfspace intersection by enumerating active
// sets and solving the equality-constrained least squares system.
std::optional<Point> HalfspaceOracle(const std::vector<Halfspace>& halfspaces,
                                     const Point& z) {
  const int m = static_cast<int>(halfspaces.size());
  const int d = static_cast<int>(z.size());
  auto feasible = [&](const Point& x) {
    for (const Halfspace& h : halfspaces) {
      if (Dot(h.normal, x) > h.offset + 1e-8) return false;
    }
    return true;
  };
  Point best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < (1 << m); ++mask) {
    std::vector<int> active;
    for (int j = 0; j < m; ++j) {
      if (mask & (1 << j)) active.push_back(j);
    }
    if (static_cast<int>(active.size()) > d) continue;
    const int k = static_cast<int>(active.size());
    Point x = z;
    if (k > 0) {
      // Solve (A A') mu = A z - b and set x = z - A' mu.
      std::vector<Vec> gram(k, Vec(k, 0.0));
      Vec rhs(k, 0.0);
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
          gram[i][j] = Dot(halfspaces[active[i]].normal,
                           halfspaces[active[j]].normal);
        }
        rhs[i] =
            Dot(halfspaces[active[i]].normal, z) - halfspaces[active[i]].offset;
        gram[i][i] += 1e-12;
      }
      Vec mu(k, 0.0);
      // Gaussian elimination.
      for (int col = 0; col < k; ++col) {
        int pivot = col;
        for (int r = col + 1; r < k; ++r) {
          if (std::abs(gram[r][col]) > std::abs(gram[pivot][col])) pivot = r;
        }
        if (std::abs(gram[pivot][col]) < 1e-14) {
          mu.clear();
          break;
        }
        std::swap(gram[pivot], gram[col]);
        std::swap(rhs[pivot], rhs[col]);
        for (int r = col + 1; r < k; ++r) {
          const double f = gram[r][col] / gram[col][col];
          for (int c = col; c < k; ++c) gram[r][c] -= f * gram[col][c];
          rhs[r] -= f * rhs[col];
        }
      }
      if (mu.empty()) continue;
      for (int r = k - 1; r >= 0; --r) {
        double s = rhs[r];
        for (int c = r + 1; c < k; ++c) s -= gram[r][c] * mu[c];
        mu[r] = s / gram[r][r];
      }
      bool dual_feasible = true;
      for (double v : mu) {
        if (v < -1e-9) dual_feasible = false;
      }
      if (!dual_feasible) continue;
      for (int i = 0; i < k; ++i) {
        Axpy(-mu[i], halfspaces[active[i]].normal, &x);
      }
    }
    if (!feasible(x)) continue;
    const double dist = Dist2(x, z);
    if (dist < best_dist) {
      best_dist = dist;
      best = x;
    }
  }
  if (best_dist == std::numeric_limits<double>::infinity()) {
    return std::nullopt;
  }
  return best;
}

// Shapley-Snow style value oracle over square kernels, for games up to 4x4.
std::optional<double> GameValueOracle(const ScalarGame& game);

CriterionResult Criterion13Oracles() {
  std::mt19937 gen(1013);
  std::uniform_real_distribution<double> range(-2.0, 2.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  bool pass = true;

  // Simplex projection vs exhaustive active sets.
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 2 + trial % 3;
    Vec v(d);
    for (double& e : v) e = range(gen);
    const MixedAction got = SimplexProject(v);
    // Exhaustive oracle.
    MixedAction want;
    double best = std::numeric_limits<double>::infinity();
    for (int mask = 1; mask < (1 << d); ++mask) {
      double sum = 0.0;
      int k = 0;
      for (int i = 0; i < d; ++i) {
        if (mask & (1 << i)) {
          sum += v[i];
          ++k;
        }
      }
      const double theta = (sum - 1.0) / k;
      MixedAction x(d, 0.0);
      bool ok = true;
      for (int i = 0; i < d; ++i) {
        if (mask & (1 << i)) {
          x[i] = v[i] - theta;
          if (x[i] < -1e-12) ok = false;
        }
      }
      if (!ok) continue;
      const double dist = Dist2(x, v);
      if (dist < best) {
        best = dist;
        want = x;
      }
    }
    for (int k = 0; k < d; ++k) {
      worst = std::max(worst, std::abs(got[k] - want[k]));
    }
  }

  // Halfspace-intersection projection vs the KKT enumeration oracle.
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 2 + trial % 3;
    const int m = 3 + trial % 3;
    Point witness(d);
    for (double& e : witness) e = 0.5 * range(gen);
    std::vector<Halfspace> halfspaces;
    for (int j = 0; j < m; ++j) {
      Vec normal(d);
      for (double& e : normal) e = range(gen);
      const double norm = Norm2(normal);
      if (norm < 1e-6) {
        normal.assign(d, 0.0);
        normal[0] = 1.0;
      }
      halfspaces.push_back(
          {normal, Dot(normal, witness) + 0.2 + unit(gen)});
    }
    const auto target =
        ConvexTarget::HalfspaceIntersection(halfspaces, witness);
    Point z(d);
    for (double& e : z) e = range(gen);
    const auto oracle = HalfspaceOracle(halfspaces, z);
    if (!oracle.has_value()) continue;
    const auto got = Project(target, z);
    worst = std::max(worst, Dist2(got.point, *oracle));
  }

  // Zero-sum values vs support enumeration.
  for (int trial = 0; trial < 1000; ++trial) {
    const int rows = 2 + trial % 3, cols = 2 + (trial / 3) % 3;
    ScalarGame game;
    game.rho.assign(rows, Vec(cols, 0.0));
    for (Vec& row : game.rho) {
      for (double& v : row) v = range(gen);
    }
    const auto oracle = GameValueOracle(game);
    if (!oracle.has_value()) {
      pass = false;
      continue;
    }
    worst = std::max(worst, std::abs(Solve(game).value - *oracle));
  }

  // Invariant measures: both outputs satisfy the balance equations.
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 2 + trial % 3;
    Matrix m(d, Vec(d, 0.0));
    for (Vec& row : m) {
      for (double& v : row) v = unit(gen) < 0.3 ? 0.0 : unit(gen);
    }
    const MixedAction lambda = InvariantMeasure(m);
    worst = std::max(worst, BalanceResidual(m, lambda));
  }

  pass = pass && worst <= 1e-7;
  return MakeResult("13 oracle equivalences", worst, 1e-7, pass,
                    "max deviation over 4x1000 random instances");
}

std::optional<double> GameValueOracle(const ScalarGame& game) {
  const int rows = game.rows(), cols = game.cols();
  auto gauss = [](std::vector<Vec> a, Vec b, Vec* sol) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
      int pivot = col;
      for (int r = col + 1; r < n; ++r) {
        if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
      }
      if (std::abs(a[pivot][col]) < 1e-11) return false;
      std::swap(a[pivot], a[col]);
      std::swap(b[pivot], b[col]);
      for (int r = col + 1; r < n; ++r) {
        const double f = a[r][col] / a[col][col];
        for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
        b[r] -= f * b[col];
      }
    }
    sol->assign(n, 0.0);
    for (int r = n - 1; r >= 0; --r) {
      double s = b[r];
      for (int c = r + 1; c < n; ++c) s -= a[r][c] * (*sol)[c];
      (*sol)[r] = s / a[r][r];
    }
    return true;
  };
  std::function<std::optional<double>(const std::vector<int>&,
                                      const std::vector<int>&)>
      solve_square = [&](const std::vector<int>& rs,
                         const std::vector<int>& cs) -> std::optional<double> {
    const int k = static_cast<int>(rs.size());
    std::vector<Vec> a(k + 1, Vec(k + 1, 0.0));
    Vec b(k + 1, 0.0);
    for (int j = 0; j < k; ++j) {
      for (int i = 0; i < k; ++i) a[j][i] = game.rho[rs[i]][cs[j]];
      a[j][k] = -1.0;
    }
    for (int i = 0; i < k; ++i) a[k][i] = 1.0;
    b[k] = 1.0;
    Vec sol;
    if (!gauss(a, b, &sol)) return std::nullopt;
    const double v = sol[k];
    MixedAction x(rows, 0.0);
    for (int i = 0; i < k; ++i) {
      if (sol[i] < -1e-9) return std::nullopt;
      x[rs[i]] = std::max(sol[i], 0.0);
    }
    std::vector<Vec> at(k + 1, Vec(k + 1, 0.0));
    Vec bt(k + 1, 0.0);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) at[i][j] = game.rho[rs[i]][cs[j]];
      at[i][k] = -1.0;
    }
    for (int j = 0; j < k; ++j) at[k][j] = 1.0;
    bt[k] = 1.0;
    Vec solc;
    if (!gauss(at, bt, &solc)) return std::nullopt;
    MixedAction y(cols, 0.0);
    for (int j = 0; j < k; ++j) {
      if (solc[j] < -1e-9) return std::nullopt;
      y[cs[j]] = std::max(solc[j], 0.0);
    }
    for (int bcol = 0; bcol < cols; ++bcol) {
      if (RowPayoff(game, x, bcol) < v - 1e-8) return std::nullopt;
    }
    for (int arow = 0; arow < rows; ++arow) {
      if (ColPayoff(game, arow, y) > v + 1e-8) return std::nullopt;
    }
    return v;
  };

  for (int k = 1; k <= std::min(rows, cols); ++k) {
    std::vector<int> rs(k), cs(k);
    std::function<std::optional<double>(int, int)> pick_cols;
    std::function<std::optional<double>(int, int)> pick_rows =
        [&](int idx, int start) -> std::optional<double> {
      if (idx == k) return pick_cols(0, 0);
      for (int r = start; r < rows; ++r) {
        rs[idx] = r;
        if (auto v = pick_rows(idx + 1, r + 1)) return v;
      }
      return std::nullopt;
    };
    pick_cols = [&](int jdx, int cstart) -> std::optional<double> {
      if (jdx == k) return solve_square(rs, cs);
      for (int c = cstart; c < cols; ++c) {
        cs[jdx] = c;
        if (auto v = pick_cols(jdx + 1, c + 1)) return v;
      }
      return std::nullopt;
    };
    if (auto v = pick_rows(0, 0)) return v;
  }
  return std::nullopt;
}

}  // namespace

std::vector<CriterionResult> VerifyLln() { return {Criterion1Lln()}; }

std::vector<CriterionResult> VerifyApproachRates() {
  return {Criterion2BlackwellRate(), Criterion3ConeRate(),
          Criterion4PotentialRate(), Criterion11WeakApproach()};
}

std::vector<CriterionResult> VerifyRegretRates() {
  return {Criterion5ExternalRegret(), Criterion6InternalRegret(),
          Criterion7Orthogonality(), Criterion14Reduction()};
}

std::vector<CriterionResult> VerifyCalibrationRates() {
  return {Criterion8GridCalibration(), Criterion9EpsIndependence(),
          Criterion10Impossibility()};
}

std::vector<CriterionResult> VerifyEquilibria() {
  return {Criterion12Equilibria()};
}

std::vector<CriterionResult> VerifyOracles() { return {Criterion13Oracles()}; }

std::vector<CriterionResult> VerifyAll() {
  std::vector<CriterionResult> all;
  auto append = [&all](std::vector<CriterionResult> part) {
    for (CriterionResult& r : part) all.push_back(std::move(r));
  };
  append(VerifyLln());
  append(VerifyApproachRates());
  append(VerifyRegretRates());
  append(VerifyCalibrationRates());
  append(VerifyEquilibria());
  append(VerifyOracles());
  std::sort(all.begin(), all.end(),
            [](const CriterionResult& a, const CriterionResult& b) {
              return std::stoi(a.name) < std::stoi(b.name);
            });
  return all;
}

std::vector<CriterionResult> RunVerifySuite(const std::string& suite) {
  if (suite == "lln") return VerifyLln();
  if (suite == "approach-rates") return VerifyApproachRates();
  if (suite == "regret-rates") return VerifyRegretRates();
  if (suite == "calibration-rates") return VerifyCalibrationRates();
  if (suite == "equilibria") return VerifyEquilibria();
  if (suite == "oracles") return VerifyOracles();
  if (suite == "all") return VerifyAll();
  throw std::invalid_argument("unknown verify suite: " + suite);
}

bool ReportResults(const std::vector<CriterionResult>& results,
                   std::ostream& out) {
  bool all_pass = true;
  for (const CriterionResult& r : results) {
    out << (r.pass ? "PASS" : "FAIL") << "  criterion " << r.name
        << "  [observed " << r.observed << ", threshold " << r.threshold
        << "]\n      " << r.details << "\n";
    all_pass = all_pass && r.pass;
  }
  return all_pass;
}

}  // namespace approachlab

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
#include <random>

#include "approachlab/equilibria.h"
#include "doctest.h"
#include "test_util.h"

namespace approachlab {
namespace {

NPlayerGame MatchingPennies() {
  return NPlayerGame::ZeroSumTwoPlayer({{{1.0, -1.0}, {-1.0, 1.0}}});
}

// Battle of the sexes with the classic 2x2 payoffs.
NPlayerGame BattleOfSexes() {
  return NPlayerGame::TwoPlayer({{{3.0, 0.0}, {0.0, 2.0}}},
                                {{{2.0, 0.0}, {0.0, 3.0}}});
}

TEST_CASE("hannan violation") {
  const NPlayerGame pennies = MatchingPennies();
  JointDistribution uniform(4, 0.25);
  const Vec v = HannanViolation(pennies, uniform);
  CHECK(v[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(v[1] == doctest::Approx(0.0).epsilon(1e-12));

  // Single-action game.
  NPlayerGame trivial;
  trivial.action_counts = {1, 1};
  trivial.payoffs = {{0.7}, {0.1}};
  const Vec tv = HannanViolation(trivial, {1.0});
  CHECK(tv[0] == doctest::Approx(0.0));

  // Point mass on a non-best-response profile: rho_1 = [[1,0],[0,0]], mass
  // on (row 2, col 1): switching to row 1 gains 1.
  NPlayerGame gap = NPlayerGame::TwoPlayer({{{1.0, 0.0}, {0.0, 0.0}}},
                                           {{{0.0, 0.0}, {0.0, 0.0}}});
  JointDistribution mass(4, 0.0);
  mass[gap.ProfileIndex({1, 0})] = 1.0;
  CHECK(HannanViolation(gap, mass)[0] == doctest::Approx(1.0));

  CHECK_THROWS_AS(HannanViolation(gap, {0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("correlated violation") {
  // The mixed Nash of battle of the sexes as a product distribution is a
  // correlated equilibrium.
  const NPlayerGame bos = BattleOfSexes();
  const MixedAction row = {0.6, 0.4};  // 3/(3+2), 2/(3+2)
  const MixedAction col = {0.4, 0.6};
  JointDistribution nash(4, 0.0);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      nash[bos.ProfileIndex({a, b})] = row[a] * col[b];
    }
  }
  const Vec v = CorrelatedViolation(bos, nash);
  CHECK(v[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(v[1] == doctest::Approx(0.0).epsilon(1e-9));

  // Mass on a dominated profile: the violation equals the dominance gap.
  NPlayerGame dominated = NPlayerGame::TwoPlayer(
      {{{0.0, 0.0}, {2.0, 2.0}}}, {{{0.0, 0.0}, {0.0, 0.0}}});
  JointDistribution mass(4, 0.0);
  mass[dominated.ProfileIndex({0, 0})] = 1.0;
  CHECK(CorrelatedViolation(dominated, mass)[0] == doctest::Approx(2.0));

  // Any Nash product of matching pennies is correlated too.
  JointDistribution uniform(4, 0.25);
  const Vec pv = CorrelatedViolation(MatchingPennies(), uniform);
  CHECK(pv[0] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("self play basics") {
  // All players single-action: point mass, zero violations.
  NPlayerGame trivial;
  trivial.action_counts = {1, 1};
  trivial.payoffs = {{0.5}, {0.5}};
  const auto result = SelfPlay(
      trivial,
      {SelfPlayAlgorithm::kRegretMatching, SelfPlayAlgorithm::kRegretMatching},
      100, 1);
  CHECK(result.empirical[0] == doctest::Approx(1.0));
  CHECK(result.hannan_series.back()[0] == doctest::Approx(0.0));

  CHECK_THROWS_AS(
      SelfPlay(trivial, {SelfPlayAlgorithm::kRegretMatching}, 10, 1),
      std::invalid_argument);
}

TEST_CASE("hannan violation equals the positive sup-norm regret") {
  // Definitional identity on the realized transcript.
  const NPlayerGame pennies = MatchingPennies();
  const auto result = SelfPlay(
      pennies,
      {SelfPlayAlgorithm::kRegretMatching, SelfPlayAlgorithm::kExpWeights},
      500, 3);
  const long n = 500;
  for (int player = 0; player < 2; ++player) {
    RegretState state(2);
    for (long m = 0; m < n; ++m) {
      const int own = result.actions[player][m];
      const int other = result.actions[1 - player][m];
      Vec outcomes(2);
      for (int a = 0; a < 2; ++a) {
        outcomes[a] = player == 0
                          ? pennies.Payoff(0, {a, other})
                          : pennies.Payoff(1, {other, a});
      }
      UpdateRegret(&state, own, outcomes);
    }
    const double regret_norm = NormInf(PositivePart(state.ExternalAverage()));
    const double violation =
        std::max(HannanViolation(pennies, result.empirical)[player], 0.0);
    CHECK(regret_norm == doctest::Approx(violation).epsilon(1e-9));
  }
}

TEST_CASE("regret matching self play approaches the Hannan set") {
  const NPlayerGame pennies = MatchingPennies();
  const long n = 10000;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto result = SelfPlay(pennies,
                                 {SelfPlayAlgorithm::kRegretMatching,
                                  SelfPlayAlgorithm::kRegretMatching},
                                 n, seed);
    for (double v : result.hannan_series.back()) {
      worst = std::max(worst, v);
    }
  }
  // External-regret bound transfers to the violation by definition, with
  // Monte-Carlo slack.
  CHECK(worst <= 2.0 * std::sqrt(2.0 / n) + 0.05);
}

TEST_CASE("internal self play drives correlated violations down") {
  const NPlayerGame bos = BattleOfSexes();
  const long n = 4000;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto result = SelfPlay(
        bos, {SelfPlayAlgorithm::kInternal, SelfPlayAlgorithm::kInternal}, n,
        seed);
    // Violation at the end is at most each player's positive pairwise
    // regret sup norm (definitional identity checked on transcripts).
    for (int player = 0; player < 2; ++player) {
      RegretState state(2);
      for (long m = 0; m < n; ++m) {
        const int own = result.actions[player][m];
        const int other = result.actions[1 - player][m];
        Vec outcomes(2);
        for (int a = 0; a < 2; ++a) {
          outcomes[a] = player == 0 ? bos.Payoff(0, {a, other})
                                    : bos.Payoff(1, {other, a});
        }
        UpdateRegret(&state, own, outcomes);
      }
      double pairwise_sup = 0.0;
      for (const Vec& row : state.PairwiseAverage()) {
        for (double v : row) pairwise_sup = std::max(pairwise_sup, v);
      }
      const double violation =
          CorrelatedViolation(bos, result.empirical)[player];
      CHECK(violation <= pairwise_sup + 1e-9);
    }
  }
}

TEST_CASE("zero-sum optimality diagnostics") {
  const NPlayerGame pennies = MatchingPennies();
  const long n = 8000;
  const auto play = SelfPlay(pennies,
                             {SelfPlayAlgorithm::kRegretMatching,
                              SelfPlayAlgorithm::kRegretMatching},
                             n, 7);
  const auto result = ZeroSumOptimality(pennies, play);
  CHECK(result.value == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(result.row_exploitability <= 4.0 * std::sqrt(2.0 / n) + 0.05);
  CHECK(result.col_exploitability <= 4.0 * std::sqrt(2.0 / n) + 0.05);
  CHECK(result.value_gaps.back() <= 0.1);

  CHECK_THROWS_AS(ZeroSumOptimality(BattleOfSexes(), play),
                  std::invalid_argument);
}

TEST_CASE("optimal fixed strategies have zero exploitability") {
  const NPlayerGame pennies = MatchingPennies();
  SelfPlayResult scripted;
  scripted.actions.assign(2, {});
  scripted.empirical.assign(4, 0.25);
  Rng rng(5);
  for (int m = 0; m < 4000; ++m) {
    scripted.actions[0].push_back(rng.Categorical({0.5, 0.5}));
    scripted.actions[1].push_back(rng.Categorical({0.5, 0.5}));
  }
  const auto result = ZeroSumOptimality(pennies, scripted);
  // Sampling noise only.
  CHECK(result.row_exploitability <= 0.05);
  CHECK(result.col_exploitability <= 0.05);
}

TEST_CASE("calibrated best response on a bilinear evaluation") {
  CbrConfig config;
  config.evaluation = [](double a, double b) { return a * (2.0 * b - 1.0); };
  config.action_candidates = {0.0, 0.25, 0.5, 0.75, 1.0};
  config.nature_grid = MakeRegularGrid(1, 0.05);
  config.eps = 0.1;
  auto nature = [](long m) { return (m % 3 == 0) ? 0.9 : 0.2; };
  const auto result = CalibratedBestResponse(config, nature, 4000, 11);
  CHECK(result.internal_scores.back() <= 0.05);
}

TEST_CASE("calibrated best response locks onto a constant Nature") {
  CbrConfig config;
  config.evaluation = [](double a, double b) { return -(a - b) * (a - b); };
  config.action_candidates = {0.0, 0.25, 0.5, 0.75, 1.0};
  config.nature_grid = MakeRegularGrid(1, 0.05);
  config.eps = 0.1;
  auto nature = [](long) { return 0.5; };  // a grid point
  const auto result = CalibratedBestResponse(config, nature, 4000, 13);
  // Once locked on, the true cell scores <= 0; only the exploration
  // residue of early stray cells remains, and it decays like 1/n.
  CHECK(result.internal_scores.back() <= 0.01);
  const std::size_t half = result.checkpoints.size() / 2;
  CHECK(result.internal_scores.back() <=
        result.internal_scores[half] + 1e-12);
}

TEST_CASE("two-phase adversary separates conditional from plain regret") {
  // Evaluation (1 - 4b) a: the first half rewards a = 1, the second half
  // punishes it; conditional scores stay small while the plain regret of the
  // running averages stays large.
  CbrConfig config;
  config.evaluation = [](double a, double b) { return (1.0 - 4.0 * b) * a; };
  config.action_candidates = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                              0.6, 0.7, 0.8, 0.9, 1.0};
  config.nature_grid = MakeRegularGrid(1, 0.05);
  config.eps = 0.2;
  const long n = 20000;
  auto nature = [n](long m) { return m < n / 2 ? 0.0 : 1.0; };
  const auto result = CalibratedBestResponse(config, nature, n, 17);
  CHECK(result.internal_scores.back() <= 0.05);
  CHECK(result.external_scores.back() >= 0.4);
}

}  // namespace
}  // namespace approachlab

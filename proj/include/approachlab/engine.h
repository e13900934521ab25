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

#ifndef APPROACHLAB_ENGINE_H_
#define APPROACHLAB_ENGINE_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "approachlab/geometry.h"
#include "approachlab/vec.h"

namespace approachlab {

// Deterministic per-episode randomness. Uniform doubles are built from the
// top 53 bits of a seeded mt19937_64, so identical seeds give identical
// draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double Uniform() { return (gen_() >> 11) * 0x1.0p-53; }

  int Categorical(const MixedAction& probs) {
    const double u = Uniform();
    double cumulative = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      cumulative += probs[i];
      if (u < cumulative) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
  }

 private:
  std::mt19937_64 gen_;
};

// A finite two-player game with vector payoffs g(a, b) in R^d.
class VectorGame {
 public:
  VectorGame(int num_player_actions, int num_nature_actions, int dim,
             std::vector<Vec> payoffs);

  // payoffs indexed a * B + b.
  static VectorGame FromTensor(std::vector<std::vector<Vec>> tensor);

  int A() const { return A_; }
  int B() const { return B_; }
  int dim() const { return dim_; }

  const Vec& Payoff(int a, int b) const { return payoffs_[a * B_ + b]; }
  // Bilinear extension g(x, b) and g(x, y).
  Vec Payoff(const MixedAction& x, int b) const;
  Vec Payoff(const MixedAction& x, const MixedAction& y) const;

  // max_{a,b} ||g(a,b)||_2, cached at construction.
  double NormInfBound() const { return norm_inf_; }

  std::uint64_t Hash() const;

 private:
  int A_, B_, dim_;
  std::vector<Vec> payoffs_;
  double norm_inf_;
};

enum class PlayMode { kSampled, kExpected };

// What strategies get to see: running averages, counts and the last stage,
// not the full transcript.
struct HistoryView {
  int stage = 0;  // completed stages
  const Vec* cesaro_avg = nullptr;
  const Vec* weighted_avg = nullptr;
  int last_player_action = -1;  // -1 in expected mode
  int last_nature_action = -1;
  const MixedAction* last_player_mixed = nullptr;
  const Vec* last_payoff = nullptr;
  const std::vector<int>* player_action_counts = nullptr;
  const std::vector<int>* nature_action_counts = nullptr;
};

class Strategy {
 public:
  virtual ~Strategy() = default;
  // Must be a deterministic function of (view, internal state, seed).
  virtual MixedAction Next(const HistoryView& view) = 0;
  virtual void Reset() = 0;
  // Optional horizon hint for doubling-trick schedules.
  virtual void SetHorizon(long /*n*/) {}
};

class NatureStrategy {
 public:
  virtual ~NatureStrategy() = default;
  virtual int Next(const HistoryView& view, Rng* rng) = 0;
  virtual void Reset() {}
};

struct StageRecord {
  int player_action = -1;  // -1 in expected mode
  int nature_action = -1;
  MixedAction player_mixed;
  Vec payoff;
  double weight = 1.0;
  Vec activation;  // chi in {0,1}^d (sampled) or [0,1]^d (expected)
};

struct Transcript {
  PlayMode mode = PlayMode::kSampled;
  std::uint64_t seed = 0;
  std::uint64_t game_hash = 0;
  int dim = 0;
  std::vector<StageRecord> stages;

  // Running sums accumulated stage by stage, in order.
  Vec payoff_sum;           // sum of g_m
  Vec weighted_payoff_sum;  // sum of w_m g_m
  double weight_sum = 0.0;
  Vec activated_payoff_sum;  // per coordinate, sum of chi_m^k g_m^k
  Vec activation_sum;        // per coordinate, sum of chi_m^k

  int length() const { return static_cast<int>(stages.size()); }
  Vec CesaroAverage() const;
  Vec WeightedAverage() const;
  // Per-coordinate activated (tilted) average with the 0/0 = 0 convention.
  Vec ActivatedAverage() const;
};

struct EpisodeOptions {
  PlayMode mode = PlayMode::kSampled;
  // Optional stage weight, clamped to [weight_low, weight_high] which must
  // lie inside (0, 1]. Declarations outside that range are rejected.
  std::function<double(int a, int b)> weight_fn;
  double weight_low = 1.0;
  double weight_high = 1.0;
  // Optional activation, values in {0,1}^d.
  std::function<Vec(int a, int b)> activation_fn;
};

// Runs n stages of player vs Nature. Identical seeds produce identical
// transcripts. Draw order per stage: the player's sampling draw, then
// Nature's. In expected mode no player draw is consumed and the recorded
// payoff is the exact bilinear g(x_m, b_m).
Transcript RunEpisode(const VectorGame& game, Strategy* player,
                      NatureStrategy* nature, long n, std::uint64_t seed,
                      const EpisodeOptions& options = {});

enum class Averaging { kCesaro, kWeighted, kActivated };

// Distance of the running average to the target after each stage.
std::vector<double> MetricSeries(const VectorGame& game,
                                 const Transcript& transcript,
                                 const ConvexTarget& target,
                                 Averaging averaging);

// Per-stage separation slack
//   eps_n = <avg_n - Pi(avg_n), g(x_{n+1}, b_{n+1}) - Pi(avg_n)>
// for n = 1..length-1, with contribution 0 when avg_n is in the target.
// Requires an expectation-mode transcript.
std::vector<double> BlackwellSlack(const Transcript& transcript,
                                   const ConvexTarget& target);

// Monte-Carlo aggregation over trials. Trial t runs with seed
// base_seed + t and must return one value per declared checkpoint.
struct MonteCarloResult {
  std::vector<double> mean;
  std::vector<double> stddev;  // population standard deviation
  std::vector<double> max;
};
MonteCarloResult MonteCarlo(
    int trials, std::uint64_t base_seed, int num_checkpoints,
    const std::function<std::vector<double>(std::uint64_t seed)>& trial_fn);

// Worker cap used by MonteCarlo; reads APPROACHLAB_THREADS, defaulting to
// the hardware concurrency.
int MaxThreads();

// CSV export with header
//   stage,player_action,nature_action,payoff_0..payoff_{d-1},weight
// plus a sidecar JSON (same path with extension .json) holding run metadata.
void WriteTranscriptCsv(const Transcript& transcript,
                        const std::string& csv_path);

// Built-in Natures.
class FixedNature : public NatureStrategy {
 public:
  explicit FixedNature(int action) : action_(action) {}
  int Next(const HistoryView&, Rng*) override { return action_; }

 private:
  int action_;
};

class IidNature : public NatureStrategy {
 public:
  explicit IidNature(MixedAction y) : y_(std::move(y)) {}
  int Next(const HistoryView&, Rng* rng) override {
    return rng->Categorical(y_);
  }

 private:
  MixedAction y_;
};

class CyclingNature : public NatureStrategy {
 public:
  explicit CyclingNature(std::vector<int> actions)
      : actions_(std::move(actions)) {}
  int Next(const HistoryView& view, Rng*) override {
    return actions_[view.stage % actions_.size()];
  }

 private:
  std::vector<int> actions_;
};

class FixedStrategy : public Strategy {
 public:
  explicit FixedStrategy(MixedAction x) : x_(std::move(x)) {}
  MixedAction Next(const HistoryView&) override { return x_; }
  void Reset() override {}

 private:
  MixedAction x_;
};

}  // namespace approachlab

#endif  // APPROACHLAB_ENGINE_H_

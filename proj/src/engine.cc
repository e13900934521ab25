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

#include "approachlab/engine.h"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace approachlab {

VectorGame::VectorGame(int num_player_actions, int num_nature_actions, int dim,
                       std::vector<Vec> payoffs)
    : A_(num_player_actions),
      B_(num_nature_actions),
      dim_(dim),
      payoffs_(std::move(payoffs)) {
  if (A_ < 1 || B_ < 1 || dim_ < 1) {
    throw std::invalid_argument("VectorGame: A, B and dim must be >= 1");
  }
  if (static_cast<int>(payoffs_.size()) != A_ * B_) {
    throw std::invalid_argument("VectorGame: payoff tensor size mismatch");
  }
  norm_inf_ = 0.0;
  for (const Vec& g : payoffs_) {
    CheckDim(g, dim_, "VectorGame payoff");
    CheckFinite(g, "VectorGame payoff");
    norm_inf_ = std::max(norm_inf_, Norm2(g));
  }
}

VectorGame VectorGame::FromTensor(std::vector<std::vector<Vec>> tensor) {
  const int a = static_cast<int>(tensor.size());
  const int b = a > 0 ? static_cast<int>(tensor[0].size()) : 0;
  const int d = (a > 0 && b > 0) ? static_cast<int>(tensor[0][0].size()) : 0;
  std::vector<Vec> flat;
  flat.reserve(a * b);
  for (auto& row : tensor) {
    if (static_cast<int>(row.size()) != b) {
      throw std::invalid_argument("VectorGame: ragged tensor");
    }
    for (auto& cell : row) flat.push_back(std::move(cell));
  }
  return VectorGame(a, b, d, std::move(flat));
}

Vec VectorGame::Payoff(const MixedAction& x, int b) const {
  Vec out(dim_, 0.0);
  for (int a = 0; a < A_; ++a) {
    if (x[a] != 0.0) Axpy(x[a], Payoff(a, b), &out);
  }
  return out;
}

Vec VectorGame::Payoff(const MixedAction& x, const MixedAction& y) const {
  Vec out(dim_, 0.0);
  for (int a = 0; a < A_; ++a) {
    for (int b = 0; b < B_; ++b) {
      const double w = x[a] * y[b];
      if (w != 0.0) Axpy(w, Payoff(a, b), &out);
    }
  }
  return out;
}

std::uint64_t VectorGame::Hash() const {
  // FNV-1a over the dimensions and raw payoff bytes.
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t len) {
    const unsigned char* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  const int dims[3] = {A_, B_, dim_};
  mix(dims, sizeof(dims));
  for (const Vec& g : payoffs_) mix(g.data(), g.size() * sizeof(double));
  return h;
}

Vec Transcript::CesaroAverage() const {
  if (stages.empty()) return Vec(dim, 0.0);
  return Scale(payoff_sum, 1.0 / static_cast<double>(stages.size()));
}

Vec Transcript::WeightedAverage() const {
  if (weight_sum <= 0.0) return Vec(dim, 0.0);
  return Scale(weighted_payoff_sum, 1.0 / weight_sum);
}

Vec Transcript::ActivatedAverage() const {
  Vec out(dim, 0.0);
  for (int k = 0; k < dim; ++k) {
    out[k] = activation_sum[k] > 0.0
                 ? activated_payoff_sum[k] / activation_sum[k]
                 : 0.0;
  }
  return out;
}

namespace {

HistoryView MakeView(const Transcript& t, const Vec& cesaro,
                     const Vec& weighted, const std::vector<int>& a_counts,
                     const std::vector<int>& b_counts) {
  HistoryView view;
  view.stage = t.length();
  view.player_action_counts = &a_counts;
  view.nature_action_counts = &b_counts;
  if (!t.stages.empty()) {
    const StageRecord& last = t.stages.back();
    view.cesaro_avg = &cesaro;
    view.weighted_avg = &weighted;
    view.last_player_action = last.player_action;
    view.last_nature_action = last.nature_action;
    view.last_player_mixed = &last.player_mixed;
    view.last_payoff = &last.payoff;
  }
  return view;
}

}  // namespace

Transcript RunEpisode(const VectorGame& game, Strategy* player,
                      NatureStrategy* nature, long n, std::uint64_t seed,
                      const EpisodeOptions& options) {
  if (n < 0) throw std::invalid_argument("RunEpisode: n must be >= 0");
  if (options.weight_fn &&
      !(options.weight_low > 0.0 && options.weight_low <= options.weight_high &&
        options.weight_high <= 1.0)) {
    throw std::invalid_argument(
        "RunEpisode: weight range must lie inside (0, 1]");
  }

  Rng rng(seed);
  Transcript t;
  t.mode = options.mode;
  t.seed = seed;
  t.game_hash = game.Hash();
  t.dim = game.dim();
  t.stages.reserve(n);
  t.payoff_sum.assign(game.dim(), 0.0);
  t.weighted_payoff_sum.assign(game.dim(), 0.0);
  t.activated_payoff_sum.assign(game.dim(), 0.0);
  t.activation_sum.assign(game.dim(), 0.0);

  std::vector<int> a_counts(game.A(), 0), b_counts(game.B(), 0);
  Vec cesaro(game.dim(), 0.0), weighted(game.dim(), 0.0);

  for (long m = 0; m < n; ++m) {
    const HistoryView view =
        MakeView(t, cesaro, weighted, a_counts, b_counts);
    MixedAction x = player->Next(view);
    if (static_cast<int>(x.size()) != game.A() || !IsMixedAction(x)) {
      throw std::runtime_error("RunEpisode: invalid mixed action at stage " +
                               std::to_string(m + 1));
    }
    StageRecord rec;
    if (options.mode == PlayMode::kSampled) {
      rec.player_action = rng.Categorical(x);
    }
    const int b = nature->Next(view, &rng);
    if (b < 0 || b >= game.B()) {
      throw std::runtime_error("RunEpisode: invalid Nature action at stage " +
                               std::to_string(m + 1));
    }
    rec.nature_action = b;
    rec.player_mixed = std::move(x);

    if (options.mode == PlayMode::kSampled) {
      rec.payoff = game.Payoff(rec.player_action, b);
      rec.weight = options.weight_fn ? options.weight_fn(rec.player_action, b)
                                     : 1.0;
      rec.activation = options.activation_fn
                           ? options.activation_fn(rec.player_action, b)
                           : Vec(game.dim(), 1.0);
      ++a_counts[rec.player_action];
    } else {
      rec.payoff = game.Payoff(rec.player_mixed, b);
      if (options.weight_fn) {
        double w = 0.0;
        for (int a = 0; a < game.A(); ++a) {
          w += rec.player_mixed[a] * options.weight_fn(a, b);
        }
        rec.weight = w;
      }
      if (options.activation_fn) {
        rec.activation.assign(game.dim(), 0.0);
        for (int a = 0; a < game.A(); ++a) {
          if (rec.player_mixed[a] != 0.0) {
            Axpy(rec.player_mixed[a], options.activation_fn(a, b),
                 &rec.activation);
          }
        }
      } else {
        rec.activation.assign(game.dim(), 1.0);
      }
    }
    if (options.weight_fn) {
      rec.weight = std::min(std::max(rec.weight, options.weight_low),
                            options.weight_high);
    }
    ++b_counts[b];

    Axpy(1.0, rec.payoff, &t.payoff_sum);
    Axpy(rec.weight, rec.payoff, &t.weighted_payoff_sum);
    t.weight_sum += rec.weight;
    for (int k = 0; k < game.dim(); ++k) {
      t.activated_payoff_sum[k] += rec.activation[k] * rec.payoff[k];
      t.activation_sum[k] += rec.activation[k];
    }
    t.stages.push_back(std::move(rec));

    const double inv = 1.0 / static_cast<double>(m + 1);
    for (int k = 0; k < game.dim(); ++k) {
      cesaro[k] = t.payoff_sum[k] * inv;
      weighted[k] =
          t.weight_sum > 0.0 ? t.weighted_payoff_sum[k] / t.weight_sum : 0.0;
    }
  }
  return t;
}

std::vector<double> MetricSeries(const VectorGame& game,
                                 const Transcript& transcript,
                                 const ConvexTarget& target,
                                 Averaging averaging) {
  (void)game;
  if (target.dim() != transcript.dim) {
    throw std::invalid_argument("MetricSeries: dimension mismatch");
  }
  const int d = transcript.dim;
  Vec sum(d, 0.0), wsum(d, 0.0), asum(d, 0.0), acount(d, 0.0);
  double wtotal = 0.0;
  std::vector<double> out;
  out.reserve(transcript.length());
  Vec avg(d, 0.0);
  for (int m = 0; m < transcript.length(); ++m) {
    const StageRecord& rec = transcript.stages[m];
    Axpy(1.0, rec.payoff, &sum);
    Axpy(rec.weight, rec.payoff, &wsum);
    wtotal += rec.weight;
    for (int k = 0; k < d; ++k) {
      asum[k] += rec.activation[k] * rec.payoff[k];
      acount[k] += rec.activation[k];
    }
    switch (averaging) {
      case Averaging::kCesaro:
        avg = Scale(sum, 1.0 / (m + 1));
        break;
      case Averaging::kWeighted:
        avg = wtotal > 0.0 ? Scale(wsum, 1.0 / wtotal) : Vec(d, 0.0);
        break;
      case Averaging::kActivated:
        for (int k = 0; k < d; ++k) {
          avg[k] = acount[k] > 0.0 ? asum[k] / acount[k] : 0.0;
        }
        break;
    }
    out.push_back(Distance(target, avg));
  }
  return out;
}

std::vector<double> BlackwellSlack(const Transcript& transcript,
                                   const ConvexTarget& target) {
  if (transcript.mode != PlayMode::kExpected) {
    throw std::invalid_argument(
        "BlackwellSlack: unsupported mode, expectation-mode transcript "
        "required");
  }
  const int d = transcript.dim;
  std::vector<double> out;
  Vec sum(d, 0.0);
  for (int m = 0; m + 1 < transcript.length(); ++m) {
    Axpy(1.0, transcript.stages[m].payoff, &sum);
    const Vec avg = Scale(sum, 1.0 / (m + 1));
    const ProjectionResult proj = Project(target, avg);
    if (proj.dist <= 1e-12) {
      out.push_back(0.0);
      continue;
    }
    const Vec normal = Sub(avg, proj.point);
    const Vec next = Sub(transcript.stages[m + 1].payoff, proj.point);
    out.push_back(Dot(normal, next));
  }
  return out;
}

int MaxThreads() {
  if (const char* env = std::getenv("APPROACHLAB_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

MonteCarloResult MonteCarlo(
    int trials, std::uint64_t base_seed, int num_checkpoints,
    const std::function<std::vector<double>(std::uint64_t seed)>& trial_fn) {
  if (trials < 1) throw std::invalid_argument("MonteCarlo: trials must be >= 1");
  std::vector<std::vector<double>> results(trials);
  std::vector<std::string> failures(trials);

  const int workers = std::min(MaxThreads(), trials);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int t = next.fetch_add(1);
      if (t >= trials) return;
      try {
        results[t] = trial_fn(base_seed + static_cast<std::uint64_t>(t));
      } catch (const std::exception& e) {
        failures[t] = e.what();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  for (int t = 0; t < trials; ++t) {
    if (!failures[t].empty()) {
      throw std::runtime_error("MonteCarlo: trial with seed " +
                               std::to_string(base_seed + t) + " failed: " +
                               failures[t]);
    }
    if (static_cast<int>(results[t].size()) != num_checkpoints) {
      throw std::runtime_error("MonteCarlo: trial with seed " +
                               std::to_string(base_seed + t) +
                               " returned a wrong number of checkpoints");
    }
  }

  MonteCarloResult out;
  out.mean.assign(num_checkpoints, 0.0);
  out.stddev.assign(num_checkpoints, 0.0);
  out.max.assign(num_checkpoints, -std::numeric_limits<double>::infinity());
  for (int c = 0; c < num_checkpoints; ++c) {
    double sum = 0.0;
    for (int t = 0; t < trials; ++t) {
      sum += results[t][c];
      out.max[c] = std::max(out.max[c], results[t][c]);
    }
    out.mean[c] = sum / trials;
    double var = 0.0;
    for (int t = 0; t < trials; ++t) {
      const double d = results[t][c] - out.mean[c];
      var += d * d;
    }
    out.stddev[c] = std::sqrt(var / trials);
  }
  return out;
}

void WriteTranscriptCsv(const Transcript& transcript,
                        const std::string& csv_path) {
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot open " + csv_path);
  csv << "stage,player_action,nature_action";
  for (int k = 0; k < transcript.dim; ++k) csv << ",payoff_" << k;
  csv << ",weight\n";
  csv.precision(17);
  for (int m = 0; m < transcript.length(); ++m) {
    const StageRecord& rec = transcript.stages[m];
    csv << (m + 1) << ',' << rec.player_action << ',' << rec.nature_action;
    for (int k = 0; k < transcript.dim; ++k) csv << ',' << rec.payoff[k];
    csv << ',' << rec.weight << '\n';
  }
  csv.close();

  nlohmann::json meta;
  meta["seed"] = transcript.seed;
  meta["mode"] = transcript.mode == PlayMode::kSampled ? "sampled" : "expected";
  meta["game_hash"] = transcript.game_hash;
  meta["stages"] = transcript.length();
  std::string json_path = csv_path;
  const std::size_t dot = json_path.rfind('.');
  if (dot != std::string::npos) json_path.resize(dot);
  json_path += ".json";
  std::ofstream js(json_path);
  if (!js) throw std::runtime_error("cannot open " + json_path);
  js << meta.dump(2) << '\n';
}

}  // namespace approachlab

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

#include "approachlab/zerosum.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace approachlab {
namespace {

MixedAction Normalized(Vec v) {
  double sum = 0.0;
  for (double& e : v) {
    e = std::max(e, 0.0);
    sum += e;
  }
  if (sum <= 0.0) return UniformAction(static_cast<int>(v.size()));
  for (double& e : v) e /= sum;
  return v;
}

// Primal simplex with Bland's rule on
//   max 1'q  s.t.  shifted_rho * q <= 1, q >= 0.
// The slack basis is feasible, so no phase one is needed. Returns false if
// the iteration cap is hit.
bool SimplexMatrixGame(const std::vector<Vec>& shifted, MixedAction* x,
                       MixedAction* y, double* shifted_value) {
  const int rows = static_cast<int>(shifted.size());
  const int cols = static_cast<int>(shifted[0].size());
  const int width = cols + rows + 1;

  std::vector<Vec> t(rows + 1, Vec(width, 0.0));
  std::vector<int> basis(rows);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) t[i][j] = shifted[i][j];
    t[i][cols + i] = 1.0;
    t[i][width - 1] = 1.0;
    basis[i] = cols + i;
  }
  for (int j = 0; j < cols; ++j) t[rows][j] = -1.0;

  const long max_pivots = 2000L * (rows + cols) + 10000L;
  for (long pivot = 0; pivot < max_pivots; ++pivot) {
    int enter = -1;
    for (int j = 0; j < width - 1; ++j) {
      if (t[rows][j] < -1e-12) {
        enter = j;
        break;
      }
    }
    if (enter < 0) {
      Vec q(cols, 0.0), u(rows, 0.0);
      for (int i = 0; i < rows; ++i) {
        if (basis[i] < cols) q[basis[i]] = t[i][width - 1];
      }
      for (int i = 0; i < rows; ++i) u[i] = t[rows][cols + i];
      const double objective = t[rows][width - 1];
      if (objective <= 0.0) return false;
      *shifted_value = 1.0 / objective;
      *y = Normalized(std::move(q));
      *x = Normalized(std::move(u));
      return true;
    }
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < rows; ++i) {
      if (t[i][enter] > 1e-12) {
        const double ratio = t[i][width - 1] / t[i][enter];
        if (leave < 0 || ratio < best_ratio - 1e-15 ||
            (std::abs(ratio - best_ratio) <= 1e-15 &&
             basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) return false;  // unbounded; cannot happen here
    const double pivot_value = t[leave][enter];
    for (int j = 0; j < width; ++j) t[leave][j] /= pivot_value;
    for (int i = 0; i <= rows; ++i) {
      if (i == leave || t[i][enter] == 0.0) continue;
      const double f = t[i][enter];
      for (int j = 0; j < width; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
  return false;
}

// Regret-matching self-play on the shifted game until the averaged pair
// certifies a duality gap of at most 2*eps.
bool SelfPlayFallback(const ScalarGame& game, double eps, MixedAction* x,
                      MixedAction* y, double* value) {
  const int rows = game.rows(), cols = game.cols();
  Vec row_regret(rows, 0.0), col_regret(cols, 0.0);
  Vec row_sum(rows, 0.0), col_sum(cols, 0.0);
  const long max_iters = 10000000L;
  for (long it = 1; it <= max_iters; ++it) {
    MixedAction xr = Normalized(row_regret);
    MixedAction yr = Normalized(col_regret);
    for (int i = 0; i < rows; ++i) row_sum[i] += xr[i];
    for (int j = 0; j < cols; ++j) col_sum[j] += yr[j];
    const double payoff = MixedPayoff(game, xr, yr);
    for (int a = 0; a < rows; ++a) {
      row_regret[a] += ColPayoff(game, a, yr) - payoff;
    }
    for (int b = 0; b < cols; ++b) {
      col_regret[b] += payoff - RowPayoff(game, xr, b);
    }
    if (it % 1000 == 0 || it == max_iters) {
      MixedAction xa = Normalized(row_sum), ya = Normalized(col_sum);
      double worst_row = ColPayoff(game, 0, ya);
      for (int a = 1; a < rows; ++a) {
        worst_row = std::max(worst_row, ColPayoff(game, a, ya));
      }
      double worst_col = RowPayoff(game, xa, 0);
      for (int b = 1; b < cols; ++b) {
        worst_col = std::min(worst_col, RowPayoff(game, xa, b));
      }
      if (worst_row - worst_col <= 2.0 * eps) {
        *x = std::move(xa);
        *y = std::move(ya);
        *value = 0.5 * (worst_row + worst_col);
        return true;
      }
    }
  }
  return false;
}

}  // namespace

void CheckScalarGame(const ScalarGame& game) {
  if (game.rows() == 0 || game.cols() == 0) {
    throw std::invalid_argument("ScalarGame: empty payoff matrix");
  }
  const int cols = game.cols();
  for (const Vec& row : game.rho) {
    if (static_cast<int>(row.size()) != cols) {
      throw std::invalid_argument("ScalarGame: ragged payoff matrix");
    }
    CheckFinite(row, "ScalarGame");
  }
}

double RowPayoff(const ScalarGame& game, const MixedAction& x, int b) {
  double s = 0.0;
  for (int a = 0; a < game.rows(); ++a) s += x[a] * game.rho[a][b];
  return s;
}

double ColPayoff(const ScalarGame& game, int a, const MixedAction& y) {
  return Dot(game.rho[a], y);
}

double MixedPayoff(const ScalarGame& game, const MixedAction& x,
                   const MixedAction& y) {
  double s = 0.0;
  for (int a = 0; a < game.rows(); ++a) s += x[a] * Dot(game.rho[a], y);
  return s;
}

ZeroSumSolution Solve(const ScalarGame& game, double eps) {
  CheckScalarGame(game);
  if (eps < 0.0) throw std::invalid_argument("Solve: eps must be >= 0");

  double min_entry = game.rho[0][0];
  for (const Vec& row : game.rho) {
    for (double v : row) min_entry = std::min(min_entry, v);
  }
  const double shift = 1.0 - min_entry;
  std::vector<Vec> shifted = game.rho;
  for (Vec& row : shifted) {
    for (double& v : row) v += shift;
  }

  ZeroSumSolution out;
  double shifted_value = 0.0;
  if (SimplexMatrixGame(shifted, &out.x, &out.y, &shifted_value)) {
    out.value = shifted_value - shift;
    return out;
  }
  if (SelfPlayFallback(game, eps, &out.x, &out.y, &out.value)) return out;
  throw std::runtime_error("Solve: matrix game solver did not converge");
}

ExploitabilityResult Exploitability(const ScalarGame& game,
                                    const MixedAction& x,
                                    const MixedAction& y) {
  CheckScalarGame(game);
  if (static_cast<int>(x.size()) != game.rows() ||
      static_cast<int>(y.size()) != game.cols()) {
    throw std::invalid_argument("Exploitability: dimension mismatch");
  }
  const double value = Solve(game).value;
  double worst_row = RowPayoff(game, x, 0);
  for (int b = 1; b < game.cols(); ++b) {
    worst_row = std::min(worst_row, RowPayoff(game, x, b));
  }
  double best_col = ColPayoff(game, 0, y);
  for (int a = 1; a < game.rows(); ++a) {
    best_col = std::max(best_col, ColPayoff(game, a, y));
  }
  return {value - worst_row, best_col - value};
}

}  // namespace approachlab

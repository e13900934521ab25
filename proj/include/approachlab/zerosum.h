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

#ifndef APPROACHLAB_ZEROSUM_H_
#define APPROACHLAB_ZEROSUM_H_

#include <vector>

#include "approachlab/geometry.h"
#include "approachlab/vec.h"

namespace approachlab {

// A finite two-player zero-sum game in matrix form; the row player maximizes
// rho[a][b], the column player minimizes it.
struct ScalarGame {
  std::vector<Vec> rho;

  int rows() const { return static_cast<int>(rho.size()); }
  int cols() const { return rho.empty() ? 0 : static_cast<int>(rho[0].size()); }
};

void CheckScalarGame(const ScalarGame& game);

struct ZeroSumSolution {
  double value = 0.0;
  MixedAction x;  // row player
  MixedAction y;  // column player
};

// Solves the matrix game. The returned pair certifies the value up to eps:
//   min_b x'rho(.,b) >= value - eps  and  max_a rho(a,.) y <= value + eps,
// so the duality gap is at most 2*eps. The solver is a primal simplex on the
// standard LP formulation with payoffs shifted positive; a multiplicative
// weights self-play loop takes over for ill-conditioned instances. When the
// game has several optimal strategy pairs, the first optimal basis is
// returned; callers must not assume uniqueness.
ZeroSumSolution Solve(const ScalarGame& game, double eps = 1e-9);

// Gap of each strategy against the exact game value:
//   row_gap = value - min_b x'rho(.,b), col_gap = max_a rho(a,.) y - value.
// Both are >= 0 up to solver tolerance.
struct ExploitabilityResult {
  double row_gap = 0.0;
  double col_gap = 0.0;
};
ExploitabilityResult Exploitability(const ScalarGame& game,
                                    const MixedAction& x,
                                    const MixedAction& y);

// Payoff helpers.
double RowPayoff(const ScalarGame& game, const MixedAction& x, int b);
double ColPayoff(const ScalarGame& game, int a, const MixedAction& y);
double MixedPayoff(const ScalarGame& game, const MixedAction& x,
                   const MixedAction& y);

}  // namespace approachlab

#endif  // APPROACHLAB_ZEROSUM_H_

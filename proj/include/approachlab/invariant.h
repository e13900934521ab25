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

#ifndef APPROACHLAB_INVARIANT_H_
#define APPROACHLAB_INVARIANT_H_

#include <vector>

#include "approachlab/geometry.h"
#include "approachlab/vec.h"

namespace approachlab {

using Matrix = std::vector<Vec>;

void CheckNonnegMatrix(const Matrix& m);

// Balance residual ||lambda' M - lambda o rowsums||_inf of a candidate
// invariant measure.
double BalanceResidual(const Matrix& m, const MixedAction& lambda);

// An invariant measure of a nonnegative square matrix M: a distribution
// lambda with sum_k lambda_k M[k][i] = lambda_i sum_k M[i][k] for all i.
// Computed by uniformizing M into a stochastic matrix and taking the power
// iteration limit from the uniform start (damped toward uniform first, then
// undamped for the final refinement), so reducible matrices get a canonical,
// deterministic output. M = 0 (and the identity) return uniform.
// `warm_start` seeds the iteration; the result satisfies the balance
// equations to `tol`, certified on M scaled so its largest row sum is at
// most one (balance is homogeneous in M). Throws std::runtime_error with
// the residual after 1e6 iterations without convergence.
MixedAction InvariantMeasure(const Matrix& m,
                             const MixedAction* warm_start = nullptr,
                             double tol = 1e-10);

// Stationary distribution of a row-stochastic matrix (rows sum to 1 within
// 1e-9): lambda' P = lambda' within tolerance. Same canonical iteration.
MixedAction StationaryDistribution(const Matrix& p,
                                   const MixedAction* warm_start = nullptr,
                                   double tol = 1e-10);

// Whether the uniformized chain of M is irreducible (single strongly
// connected class under reachability through positive entries).
bool IsIrreducible(const Matrix& m);

}  // namespace approachlab

#endif  // APPROACHLAB_INVARIANT_H_

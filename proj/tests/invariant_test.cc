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

#include "approachlab/invariant.h"
#include "doctest.h"
#include "test_util.h"

namespace approachlab {
namespace {

// Null-space oracle: solves the balance equations plus normalization by
// Gaussian elimination with a least-squares style pivot fallback. Returns
// some solution of the linear system; with multiple invariant measures it
// need not match the power-iteration output, so tests only compare balance
// residuals (and values when the chain is irreducible).
MixedAction NullSpaceOracle(const Matrix& m) {
  const int n = static_cast<int>(m.size());
  // Equations: sum_k x_k M[k][i] - x_i rowsum_i = 0 for all i, sum x = 1.
  std::vector<Vec> a(n + 1, Vec(n, 0.0));
  Vec b(n + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    double rowsum = 0.0;
    for (int k = 0; k < n; ++k) rowsum += m[i][k];
    for (int k = 0; k < n; ++k) a[i][k] = m[k][i];
    a[i][i] -= rowsum;
  }
  for (int k = 0; k < n; ++k) a[n][k] = 1.0;
  b[n] = 1.0;

  // Normal equations of the overdetermined system.
  std::vector<Vec> ata(n, Vec(n, 0.0));
  Vec atb(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int r = 0; r <= n; ++r) ata[i][j] += a[r][i] * a[r][j];
    }
    for (int r = 0; r <= n; ++r) atb[i] += a[r][i] * b[r];
    ata[i][i] += 1e-12;
  }
  Vec x(n, 0.0);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(ata[r][col]) > std::abs(ata[pivot][col])) pivot = r;
    }
    std::swap(ata[pivot], ata[col]);
    std::swap(atb[pivot], atb[col]);
    for (int r = col + 1; r < n; ++r) {
      const double f = ata[r][col] / ata[col][col];
      for (int c = col; c < n; ++c) ata[r][c] -= f * ata[col][c];
      atb[r] -= f * atb[col];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double s = atb[r];
    for (int c = r + 1; c < n; ++c) s -= ata[r][c] * x[c];
    x[r] = s / ata[r][r];
  }
  double sum = 0.0;
  for (double& e : x) {
    e = std::max(e, 0.0);
    sum += e;
  }
  if (sum > 0.0) {
    for (double& e : x) e /= sum;
  }
  return x;
}

TEST_CASE("invariant measure examples") {
  // Symmetric swap.
  auto lambda = InvariantMeasure({{0.0, 1.0}, {1.0, 0.0}});
  CHECK(lambda[0] == doctest::Approx(0.5));
  CHECK(lambda[1] == doctest::Approx(0.5));

  // Balance system solution (1/3, 2/3).
  lambda = InvariantMeasure({{0.0, 2.0}, {1.0, 0.0}});
  CHECK(lambda[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
  CHECK(lambda[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-8));

  // Identity: every distribution is invariant; the canonical output is
  // uniform.
  lambda = InvariantMeasure({{1.0, 0.0}, {0.0, 1.0}});
  CHECK(lambda[0] == doctest::Approx(0.5));

  // Zero matrix.
  lambda = InvariantMeasure({{0.0, 0.0}, {0.0, 0.0}});
  CHECK(lambda[0] == doctest::Approx(0.5));

  // All flow out of state 0.
  lambda = InvariantMeasure({{0.0, 1.0}, {0.0, 0.0}});
  CHECK(lambda[0] <= 1e-8);
  CHECK(lambda[1] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("invariant measure input validation") {
  CHECK_THROWS_AS(InvariantMeasure({}), std::invalid_argument);
  CHECK_THROWS_AS(InvariantMeasure({{1.0, -0.5}, {0.0, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(InvariantMeasure({{1.0}, {0.0}}), std::invalid_argument);
}

TEST_CASE("stationary distribution examples") {
  // Doubly stochastic.
  auto lambda = StationaryDistribution({{0.3, 0.7}, {0.7, 0.3}});
  CHECK(lambda[0] == doctest::Approx(0.5).epsilon(1e-8));

  // Absorbing state 0.
  lambda = StationaryDistribution({{1.0, 0.0}, {1.0, 0.0}});
  CHECK(lambda[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(lambda[1] <= 1e-8);

  // Identity: uniform by convention.
  lambda = StationaryDistribution({{1.0, 0.0}, {0.0, 1.0}});
  CHECK(lambda[0] == doctest::Approx(0.5));

  CHECK_THROWS_AS(StationaryDistribution({{0.9, 0.0}, {0.5, 0.5}}),
                  std::invalid_argument);
}

TEST_CASE("balance equations hold on random matrices") {
  std::mt19937 gen(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + trial % 3;
    Matrix m(n, Vec(n, 0.0));
    for (auto& row : m) {
      for (double& v : row) {
        v = unit(gen) < 0.3 ? 0.0 : unit(gen);
      }
    }
    const MixedAction lambda = InvariantMeasure(m);
    REQUIRE(IsMixedAction(lambda, 1e-8));
    CHECK(BalanceResidual(m, lambda) <= 1e-8);

    const MixedAction oracle = NullSpaceOracle(m);
    // Both outputs satisfy the balance equations; equality is only promised
    // for irreducible chains.
    CHECK(BalanceResidual(m, oracle) <= 1e-6);
    if (IsIrreducible(m)) {
      for (int k = 0; k < n; ++k) {
        CHECK(lambda[k] == doctest::Approx(oracle[k]).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("warm starts do not change the certified residual") {
  std::mt19937 gen(37);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix m(4, Vec(4, 0.0));
  for (auto& row : m) {
    for (double& v : row) v = unit(gen);
  }
  const MixedAction cold = InvariantMeasure(m);
  const MixedAction warm = InvariantMeasure(m, &cold);
  CHECK(BalanceResidual(m, warm) <= 1e-8);
  for (int k = 0; k < 4; ++k) {
    CHECK(warm[k] == doctest::Approx(cold[k]).epsilon(1e-6));
  }
}

}  // namespace
}  // namespace approachlab

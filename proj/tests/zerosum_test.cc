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
#include <functional>
#include <optional>
#include <random>

#include "approachlab/zerosum.h"
#include "doctest.h"
#include "test_util.h"

namespace approachlab {
namespace {

// Shapley-Snow oracle: enumerates square support pairs, solves the
// indifference system for each and keeps any pair that is optimal against
// every pure strategy. Independent of the simplex solver.
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

  auto solve_square = [&](const std::vector<int>& rs,
                          const std::vector<int>& cs)
      -> std::optional<double> {
    const int k = static_cast<int>(rs.size());
    const int n = k + 1;
    // Row player: x' M = v 1', sum x = 1.
    std::vector<Vec> a(n, Vec(n, 0.0));
    Vec b(n, 0.0);
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
    // Column player: M y = v 1, sum y = 1.
    std::vector<Vec> at(n, Vec(n, 0.0));
    Vec bt(n, 0.0);
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

TEST_CASE("matching pennies and constant games") {
  ScalarGame pennies{{{1.0, -1.0}, {-1.0, 1.0}}};
  auto sol = Solve(pennies);
  CHECK(sol.value == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(sol.x[0] == doctest::Approx(0.5));
  CHECK(sol.x[1] == doctest::Approx(0.5));

  ScalarGame constant{{{3.25}}};
  sol = Solve(constant);
  CHECK(sol.value == doctest::Approx(3.25));
  CHECK(sol.x[0] == doctest::Approx(1.0));
  CHECK(sol.y[0] == doctest::Approx(1.0));
}

TEST_CASE("2x2 game via indifference equations") {
  // Closed form: x = (0.25, 0.75), y = (0.5, 0.5), value 1.5.
  ScalarGame game{{{3.0, 0.0}, {1.0, 2.0}}};
  auto sol = Solve(game);
  CHECK(sol.value == doctest::Approx(1.5));
  CHECK(sol.x[0] == doctest::Approx(0.25));
  CHECK(sol.x[1] == doctest::Approx(0.75));
  CHECK(sol.y[0] == doctest::Approx(0.5));
  CHECK(sol.y[1] == doctest::Approx(0.5));
}

TEST_CASE("solver errors") {
  ScalarGame empty;
  CHECK_THROWS_AS(Solve(empty), std::invalid_argument);
}

TEST_CASE("returned strategies are certified eps-optimal") {
  std::mt19937 gen(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int rows = 1 + trial % 7;
    const int cols = 1 + (trial / 3) % 7;
    ScalarGame game;
    for (int a = 0; a < rows; ++a) {
      game.rho.push_back(test::RandomVec(gen, cols, -2.0, 2.0));
    }
    const auto sol = Solve(game, 1e-9);
    REQUIRE(IsMixedAction(sol.x));
    REQUIRE(IsMixedAction(sol.y));
    for (int b = 0; b < cols; ++b) {
      CHECK(RowPayoff(game, sol.x, b) >= sol.value - 1e-7);
    }
    for (int a = 0; a < rows; ++a) {
      CHECK(ColPayoff(game, a, sol.y) <= sol.value + 1e-7);
    }
  }
}

TEST_CASE("value matches the support-enumeration oracle up to 8x8") {
  std::mt19937 gen(5);
  for (int trial = 0; trial < 120; ++trial) {
    const int rows = 2 + trial % 7;
    const int cols = 2 + (trial / 2) % 7;
    ScalarGame game;
    for (int a = 0; a < rows; ++a) {
      game.rho.push_back(test::RandomVec(gen, cols, -1.0, 1.0));
    }
    const auto oracle = GameValueOracle(game);
    REQUIRE(oracle.has_value());
    CHECK(Solve(game, 1e-9).value == doctest::Approx(*oracle).epsilon(1e-7));
  }
}

TEST_CASE("duality: value(rho) == -value(-rho')") {
  std::mt19937 gen(9);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = 2 + trial % 4, cols = 2 + (trial / 4) % 4;
    ScalarGame game;
    for (int a = 0; a < rows; ++a) {
      game.rho.push_back(test::RandomVec(gen, cols, -1.0, 1.0));
    }
    ScalarGame transposed;
    transposed.rho.assign(cols, Vec(rows, 0.0));
    for (int a = 0; a < rows; ++a) {
      for (int b = 0; b < cols; ++b) transposed.rho[b][a] = -game.rho[a][b];
    }
    CHECK(Solve(game).value ==
          doctest::Approx(-Solve(transposed).value).epsilon(1e-7));
  }
}

TEST_CASE("exploitability") {
  ScalarGame pennies{{{1.0, -1.0}, {-1.0, 1.0}}};
  auto opt = Solve(pennies);
  auto gaps = Exploitability(pennies, opt.x, opt.y);
  CHECK(gaps.row_gap == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(gaps.col_gap == doctest::Approx(0.0).epsilon(1e-8));

  gaps = Exploitability(pennies, {1.0, 0.0}, opt.y);
  CHECK(gaps.row_gap == doctest::Approx(1.0));

  ScalarGame constant{{{2.0, 2.0}, {2.0, 2.0}}};
  gaps = Exploitability(constant, {0.3, 0.7}, {0.9, 0.1});
  CHECK(gaps.row_gap == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(gaps.col_gap == doctest::Approx(0.0).epsilon(1e-9));

  CHECK_THROWS_AS(Exploitability(pennies, {1.0}, opt.y),
                  std::invalid_argument);

  std::mt19937 gen(21);
  for (int trial = 0; trial < 100; ++trial) {
    ScalarGame game;
    for (int a = 0; a < 3; ++a) {
      game.rho.push_back(test::RandomVec(gen, 3, -1.0, 1.0));
    }
    const auto g = Exploitability(game, test::RandomMixed(gen, 3),
                                  test::RandomMixed(gen, 3));
    CHECK(g.row_gap >= -1e-9);
    CHECK(g.col_gap >= -1e-9);
  }
}

}  // namespace
}  // namespace approachlab

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

#include "approachlab/invariant.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace approachlab {
namespace {

constexpr long kMaxIterations = 1000000;

Matrix Uniformize(const Matrix& m) {
  const int n = static_cast<int>(m.size());
  double c = 0.0;
  Vec row_sums(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (double v : m[i]) row_sums[i] += v;
    c = std::max(c, row_sums[i]);
  }
  if (c <= 0.0) c = 1.0;
  Matrix p(n, Vec(n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) p[i][j] = m[i][j] / c;
    p[i][i] = (m[i][i] + c - row_sums[i]) / c;
  }
  return p;
}

// One step of lambda <- damping * lambda * (P + I)/2 + (1 - damping) * u.
// The lazy half-step keeps the stationary set of P while removing
// periodicity.
void LazyStep(const Matrix& p, double damping, MixedAction* lambda,
              MixedAction* scratch) {
  const int n = static_cast<int>(p.size());
  std::fill(scratch->begin(), scratch->end(), 0.0);
  for (int i = 0; i < n; ++i) {
    const double li = (*lambda)[i];
    if (li == 0.0) continue;
    for (int j = 0; j < n; ++j) (*scratch)[j] += li * p[i][j];
  }
  const double mix = (1.0 - damping) / n;
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    (*scratch)[j] = damping * 0.5 * ((*scratch)[j] + (*lambda)[j]) + mix;
    sum += (*scratch)[j];
  }
  for (int j = 0; j < n; ++j) (*scratch)[j] /= sum;
  lambda->swap(*scratch);
}

MixedAction PowerIterate(const Matrix& p, const Matrix& residual_matrix,
                         bool residual_is_stationary,
                         const MixedAction* warm_start, double tol) {
  const int n = static_cast<int>(p.size());
  MixedAction lambda = UniformAction(n);
  MixedAction scratch(n, 0.0);

  auto residual = [&](const MixedAction& l) {
    if (residual_is_stationary) {
      double r = 0.0;
      for (int j = 0; j < n; ++j) {
        double flow = 0.0;
        for (int i = 0; i < n; ++i) flow += l[i] * residual_matrix[i][j];
        r = std::max(r, std::abs(flow - l[j]));
      }
      return r;
    }
    return BalanceResidual(residual_matrix, l);
  };

  // Balance to `tol` is the target; 1e-8 is the certified contract and is
  // accepted when the iteration budget runs out on slowly mixing chains.
  const double accept_tol = std::max(tol, 1e-8);

  // A warm start near a solution skips the damped phase entirely.
  if (warm_start != nullptr && static_cast<int>(warm_start->size()) == n &&
      IsMixedAction(*warm_start, 1e-6)) {
    MixedAction warm = *warm_start;
    for (int it = 0; it < 30000; ++it) {
      if (residual(warm) <= tol) return warm;
      LazyStep(p, 1.0, &warm, &scratch);
    }
    if (residual(warm) <= accept_tol) return warm;
  }

  long iterations = 0;
  if (n <= 64) {
    // Squaring the lazy transition matrix reaches the power-iteration limit
    // of the uniform start in logarithmically many products, independent of
    // the mixing time; slowly mixing and reducible chains alike get the
    // canonical deterministic answer.
    Matrix q(n, Vec(n, 0.0));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) q[i][j] = 0.5 * p[i][j];
      q[i][i] += 0.5;
    }
    Matrix product(n, Vec(n, 0.0));
    for (int squaring = 0; squaring < 60; ++squaring) {
      for (int i = 0; i < n; ++i) {
        Vec& row = product[i];
        std::fill(row.begin(), row.end(), 0.0);
        for (int k = 0; k < n; ++k) {
          const double w = q[i][k];
          if (w == 0.0) continue;
          for (int j = 0; j < n; ++j) row[j] += w * q[k][j];
        }
        double sum = 0.0;
        for (double v : row) sum += v;
        for (double& v : row) v /= sum;
      }
      q.swap(product);
    }
    for (int j = 0; j < n; ++j) {
      double mass = 0.0;
      for (int i = 0; i < n; ++i) mass += q[i][j];
      lambda[j] = mass / n;
    }
    for (int polish = 0; polish < 2000; ++polish) {
      if (residual(lambda) <= tol) return lambda;
      LazyStep(p, 1.0, &lambda, &scratch);
    }
    if (residual(lambda) <= accept_tol) return lambda;
  } else {
    // Damped phase: contract toward the damped fixed point.
    double damping = 0.999;
    double prev_change = 1.0;
    while (iterations < kMaxIterations / 2) {
      MixedAction before = lambda;
      LazyStep(p, damping, &lambda, &scratch);
      ++iterations;
      double change = 0.0;
      for (int j = 0; j < n; ++j) {
        change = std::max(change, std::abs(lambda[j] - before[j]));
      }
      if (change <= 1e-14 || (iterations > 1000 && change >= prev_change &&
                              change <= 1e-12)) {
        break;
      }
      prev_change = change;
    }
  }
  // Refinement with the damping dropped to zero.
  while (iterations < kMaxIterations) {
    if (residual(lambda) <= tol) return lambda;
    LazyStep(p, 1.0, &lambda, &scratch);
    ++iterations;
  }
  const double r = residual(lambda);
  if (r <= accept_tol) return lambda;
  std::ostringstream message;
  message << "InvariantMeasure: no convergence, residual " << r;
  throw std::runtime_error(message.str());
}

}  // namespace

void CheckNonnegMatrix(const Matrix& m) {
  const int n = static_cast<int>(m.size());
  if (n == 0) throw std::invalid_argument("matrix: empty");
  for (const Vec& row : m) {
    if (static_cast<int>(row.size()) != n) {
      throw std::invalid_argument("matrix: not square");
    }
    for (double v : row) {
      if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument("matrix: entries must be finite and >= 0");
      }
    }
  }
}

double BalanceResidual(const Matrix& m, const MixedAction& lambda) {
  const int n = static_cast<int>(m.size());
  double r = 0.0;
  for (int i = 0; i < n; ++i) {
    double inflow = 0.0, outflow = 0.0;
    for (int k = 0; k < n; ++k) {
      inflow += lambda[k] * m[k][i];
      outflow += m[i][k];
    }
    r = std::max(r, std::abs(inflow - lambda[i] * outflow));
  }
  return r;
}

MixedAction InvariantMeasure(const Matrix& m, const MixedAction* warm_start,
                             double tol) {
  CheckNonnegMatrix(m);
  // The balance equations are homogeneous, so the residual is certified on
  // the row-sum-normalized matrix; otherwise large accumulated matrices
  // would demand tolerances below double precision.
  double c = 0.0;
  for (const Vec& row : m) {
    double sum = 0.0;
    for (double v : row) sum += v;
    c = std::max(c, sum);
  }
  if (c > 1.0) {
    Matrix scaled = m;
    for (Vec& row : scaled) {
      for (double& v : row) v /= c;
    }
    return PowerIterate(Uniformize(scaled), scaled,
                        /*residual_is_stationary=*/false, warm_start, tol);
  }
  return PowerIterate(Uniformize(m), m, /*residual_is_stationary=*/false,
                      warm_start, tol);
}

MixedAction StationaryDistribution(const Matrix& p,
                                   const MixedAction* warm_start, double tol) {
  const int n = static_cast<int>(p.size());
  if (n == 0) throw std::invalid_argument("StationaryDistribution: empty");
  for (const Vec& row : p) {
    if (static_cast<int>(row.size()) != n) {
      throw std::invalid_argument("StationaryDistribution: not square");
    }
    double sum = 0.0;
    for (double v : row) {
      if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument(
            "StationaryDistribution: entries must be finite and >= 0");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw std::invalid_argument(
          "StationaryDistribution: rows must sum to 1");
    }
  }
  return PowerIterate(p, p, /*residual_is_stationary=*/true, warm_start, tol);
}

bool IsIrreducible(const Matrix& m) {
  CheckNonnegMatrix(m);
  const int n = static_cast<int>(m.size());
  const Matrix p = Uniformize(m);
  auto reaches_all = [&](bool forward) {
    std::vector<bool> seen(n, false);
    std::vector<int> stack = {0};
    seen[0] = true;
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      for (int j = 0; j < n; ++j) {
        const double edge = forward ? p[i][j] : p[j][i];
        if (edge > 0.0 && !seen[j]) {
          seen[j] = true;
          stack.push_back(j);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  };
  return reaches_all(true) && reaches_all(false);
}

}  // namespace approachlab

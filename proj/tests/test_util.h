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

#ifndef APPROACHLAB_TESTS_TEST_UTIL_H_
#define APPROACHLAB_TESTS_TEST_UTIL_H_

#include <cmath>
#include <random>
#include <vector>

#include "approachlab/geometry.h"
#include "approachlab/vec.h"

namespace approachlab::test {

inline Vec RandomVec(std::mt19937& gen, int dim, double lo = -1.0,
                     double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Vec v(dim);
  for (double& e : v) e = dist(gen);
  return v;
}

inline MixedAction RandomMixed(std::mt19937& gen, int n) {
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

// Exhaustive active-set oracle for the Euclidean projection onto the
// probability simplex: tries every support set and keeps the best feasible
// KKT point. Independent of the sort-based implementation.
inline MixedAction SimplexProjectOracle(const Vec& v) {
  const int n = static_cast<int>(v.size());
  MixedAction best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int mask = 1; mask < (1 << n); ++mask) {
    int k = 0;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1 << i)) {
        ++k;
        sum += v[i];
      }
    }
    const double theta = (sum - 1.0) / k;
    MixedAction x(n, 0.0);
    bool feasible = true;
    for (int i = 0; i < n; ++i) {
      if (mask & (1 << i)) {
        x[i] = v[i] - theta;
        if (x[i] < -1e-12) feasible = false;
      }
    }
    if (!feasible) continue;
    const double dist = Dist2(x, v);
    if (dist < best_dist) {
      best_dist = dist;
      best = x;
    }
  }
  return best;
}

// Draws a point of the target, for variational projection checks.
inline Point RandomTargetPoint(std::mt19937& gen, const ConvexTarget& t,
                               double box_range = 3.0) {
  using Kind = ConvexTarget::Kind;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  switch (t.kind()) {
    case Kind::kOrthant: {
      Point p(t.dim());
      for (int k = 0; k < t.dim(); ++k) {
        const double u = unit(gen) * box_range;
        p[k] = t.signs()[k] < 0 ? -u : u;
      }
      return p;
    }
    case Kind::kBox: {
      Point p(t.dim());
      for (int k = 0; k < t.dim(); ++k) {
        double lo = std::max(t.lower()[k], -box_range);
        double hi = std::min(t.upper()[k], box_range);
        p[k] = lo + unit(gen) * (hi - lo);
      }
      return p;
    }
    case Kind::kBall: {
      Point dir = RandomVec(gen, t.dim());
      const double norm = Norm2(dir);
      const double r = t.radius() * std::pow(unit(gen), 1.0 / t.dim());
      Point p = t.center();
      if (norm > 0.0) Axpy(r / norm, dir, &p);
      return p;
    }
    case Kind::kHalfspaceIntersection: {
      // Rejection sampling around the witness.
      for (int attempt = 0; attempt < 20000; ++attempt) {
        Point p = t.witness();
        Point jitter = RandomVec(gen, t.dim(), -box_range, box_range);
        Axpy(1.0, jitter, &p);
        bool ok = true;
        for (const Halfspace& h : t.halfspaces()) {
          if (Dot(h.normal, p) > h.offset) {
            ok = false;
            break;
          }
        }
        if (ok) return p;
      }
      return t.witness();
    }
    case Kind::kConeLift: {
      const ConvexTarget& inner = t.inner();
      Point c = RandomTargetPoint(gen, inner, box_range);
      if (t.lift_mode() == ConvexTarget::LiftMode::kScalar) {
        const double w =
            t.omega_low() + unit(gen) * (t.omega_high() - t.omega_low());
        Point p(t.dim());
        for (int k = 0; k < inner.dim(); ++k) p[k] = w * c[k];
        p[inner.dim()] = w;
        return p;
      }
      Point p(t.dim());
      for (int k = 0; k < inner.dim(); ++k) {
        const double w = unit(gen) * box_range;
        p[k] = w * c[k];
        p[inner.dim() + k] = w;
      }
      return p;
    }
  }
  return Point(t.dim(), 0.0);
}

}  // namespace approachlab::test

#endif  // APPROACHLAB_TESTS_TEST_UTIL_H_

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

#include "approachlab/geometry.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace approachlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Solves the dense linear system A x = b in place; returns false if singular.
bool SolveLinear(std::vector<Vec> a, Vec b, Vec* x) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-12) return false;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (int r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  x->assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a[r][c] * (*x)[c];
    (*x)[r] = s / a[r][r];
  }
  return true;
}

Point ProjectOrthant(const std::vector<int>& signs, const Point& z) {
  Point out(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) {
    out[k] = signs[k] < 0 ? std::min(z[k], 0.0) : std::max(z[k], 0.0);
  }
  return out;
}

Point ProjectBox(const Vec& lower, const Vec& upper, const Point& z) {
  Point out(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) {
    out[k] = std::min(std::max(z[k], lower[k]), upper[k]);
  }
  return out;
}

Point ProjectBall(const Point& center, double radius, const Point& z) {
  Point diff = Sub(z, center);
  const double norm = Norm2(diff);
  if (norm <= radius) return z;
  Point out = center;
  Axpy(radius / norm, diff, &out);
  return out;
}

double MaxHalfspaceViolation(const std::vector<Halfspace>& hs,
                             const Point& z) {
  double v = 0.0;
  for (const Halfspace& h : hs) v = std::max(v, Dot(h.normal, z) - h.offset);
  return v;
}

Point ProjectHalfspaces(const std::vector<Halfspace>& hs, const Point& z) {
  // Dykstra's alternating projections.
  constexpr double kTol = 1e-10;
  constexpr int kMaxSweeps = 10000;
  const std::size_t m = hs.size();
  Point x = z;
  std::vector<Vec> corrections(m, Vec(z.size(), 0.0));
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double change = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      Point u = Add(x, corrections[j]);
      const double viol = Dot(hs[j].normal, u) - hs[j].offset;
      Point projected = u;
      if (viol > 0.0) {
        Axpy(-viol / Norm2Sq(hs[j].normal), hs[j].normal, &projected);
      }
      corrections[j] = Sub(u, projected);
      change = std::max(change, Dist2(projected, x));
      x = std::move(projected);
    }
    if (change <= kTol && MaxHalfspaceViolation(hs, x) <= kTol) return x;
  }
  throw std::runtime_error(
      "halfspace projection did not converge; residual " +
      std::to_string(MaxHalfspaceViolation(hs, x)));
}

// Projection of a point onto the 2-d cone {(u, v) : v >= 0, lo*v <= u <=
// hi*v}, which contains the vertical ray since lo <= 0 <= hi.
void ProjectRatioCone2d(double lo, double hi, double u, double v, double* pu,
                        double* pv) {
  if (v >= 0.0 && u >= lo * v && u <= hi * v) {
    *pu = u;
    *pv = v;
    return;
  }
  double best = kInf;
  for (double slope : {lo, hi}) {
    // Ray {t * (slope, 1) : t >= 0}.
    const double denom = slope * slope + 1.0;
    const double t = std::max(0.0, (slope * u + v) / denom);
    const double cu = t * slope, cv = t;
    const double d = (cu - u) * (cu - u) + (cv - v) * (cv - v);
    if (d < best) {
      best = d;
      *pu = cu;
      *pv = cv;
    }
  }
}

ProjectionResult ProjectConeLiftScalar(const ConvexTarget& target,
                                       const Point& z) {
  const ConvexTarget& inner = target.inner();
  const int d = inner.dim();
  Point base(z.begin(), z.begin() + d);
  const double w = z[d];
  const double lo = target.omega_low(), hi = target.omega_high();

  auto objective = [&](double omega) {
    Point scaled = Scale(base, 1.0 / omega);
    const double dist = Distance(inner, scaled);
    const double dw = w - omega;
    return omega * omega * dist * dist + dw * dw;
  };

  // The slice-minimum is convex in omega; golden-section search.
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, hi); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = objective(x2);
    }
  }
  const double omega = (a + b) / 2.0;
  ProjectionResult inner_proj = Project(inner, Scale(base, 1.0 / omega));
  Point out(d + 1);
  for (int k = 0; k < d; ++k) out[k] = omega * inner_proj.point[k];
  out[d] = omega;
  const double dist = Dist2(out, z);
  return {std::move(out), dist};
}

ProjectionResult ProjectConeLiftPerCoordinate(const ConvexTarget& target,
                                              const Point& z) {
  const ConvexTarget& inner = target.inner();
  const int d = inner.dim();
  Point out(2 * d);
  for (int k = 0; k < d; ++k) {
    ProjectRatioCone2d(inner.lower()[k], inner.upper()[k], z[k], z[d + k],
                       &out[k], &out[d + k]);
  }
  const double dist = Dist2(out, z);
  return {std::move(out), dist};
}

}  // namespace

bool IsMixedAction(const MixedAction& x, double tol) {
  if (x.empty() || !AllFinite(x)) return false;
  double sum = 0.0;
  for (double v : x) {
    if (v < -tol) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

void CheckMixedAction(const MixedAction& x, const std::string& what) {
  if (!IsMixedAction(x)) {
    throw std::invalid_argument(what + ": not a probability vector");
  }
}

MixedAction UniformAction(int n) {
  return MixedAction(n, 1.0 / static_cast<double>(n));
}

MixedAction SimplexProject(const Vec& v) {
  CheckFinite(v, "SimplexProject");
  const int n = static_cast<int>(v.size());
  Vec sorted = v;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cumulative = 0.0, theta = 0.0;
  int support = 0;
  for (int k = 0; k < n; ++k) {
    cumulative += sorted[k];
    const double t = (cumulative - 1.0) / (k + 1);
    if (sorted[k] - t > 0.0) {
      support = k + 1;
      theta = t;
    }
  }
  (void)support;
  MixedAction out(n);
  for (int k = 0; k < n; ++k) out[k] = std::max(0.0, v[k] - theta);
  return out;
}

Vec CornerSimplexProject(const Vec& v) {
  Vec clipped = PositivePart(v);
  const double sum = std::accumulate(clipped.begin(), clipped.end(), 0.0);
  if (sum <= 1.0) return clipped;
  return SimplexProject(v);
}

Vec FullToReduced(const Vec& full) {
  return Vec(full.begin() + 1, full.end());
}

Vec ReducedToFull(const Vec& reduced) {
  Vec full(reduced.size() + 1);
  double sum = 0.0;
  for (std::size_t k = 0; k < reduced.size(); ++k) {
    full[k + 1] = reduced[k];
    sum += reduced[k];
  }
  full[0] = 1.0 - sum;
  return full;
}

ConvexTarget ConvexTarget::Orthant(std::vector<int> signs) {
  ConvexTarget t;
  t.kind_ = Kind::kOrthant;
  t.dim_ = static_cast<int>(signs.size());
  t.signs_ = std::move(signs);
  return t;
}

ConvexTarget ConvexTarget::NegativeOrthant(int dim) {
  return Orthant(std::vector<int>(dim, -1));
}

ConvexTarget ConvexTarget::Box(Vec lower, Vec upper) {
  if (lower.size() != upper.size()) {
    throw std::invalid_argument("Box: bound dimensions differ");
  }
  for (std::size_t k = 0; k < lower.size(); ++k) {
    if (!(lower[k] <= upper[k])) {
      throw std::invalid_argument("Box: lower > upper");
    }
  }
  ConvexTarget t;
  t.kind_ = Kind::kBox;
  t.dim_ = static_cast<int>(lower.size());
  t.lower_ = std::move(lower);
  t.upper_ = std::move(upper);
  return t;
}

ConvexTarget ConvexTarget::Singleton(Point p) {
  Vec lower = p;
  return Box(std::move(lower), std::move(p));
}

ConvexTarget ConvexTarget::Ball(Point center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("Ball: radius must be > 0");
  CheckFinite(center, "Ball center");
  ConvexTarget t;
  t.kind_ = Kind::kBall;
  t.dim_ = static_cast<int>(center.size());
  t.center_ = std::move(center);
  t.radius_ = radius;
  return t;
}

ConvexTarget ConvexTarget::HalfspaceIntersection(
    std::vector<Halfspace> halfspaces, Point witness) {
  if (halfspaces.empty()) {
    throw std::invalid_argument("HalfspaceIntersection: empty constraint set");
  }
  if (MaxHalfspaceViolation(halfspaces, witness) > 1e-9) {
    throw std::invalid_argument(
        "HalfspaceIntersection: witness point is infeasible");
  }
  ConvexTarget t;
  t.kind_ = Kind::kHalfspaceIntersection;
  t.dim_ = static_cast<int>(witness.size());
  t.halfspaces_ = std::move(halfspaces);
  t.witness_ = std::move(witness);
  return t;
}

ConvexTarget ConvexTarget::ConeLift(ConvexTarget inner, double omega_low,
                                    double omega_high) {
  if (!(omega_low > 0.0 && omega_low <= omega_high)) {
    throw std::invalid_argument("ConeLift: need 0 < omega_low <= omega_high");
  }
  ConvexTarget t;
  t.kind_ = Kind::kConeLift;
  t.dim_ = inner.dim() + 1;
  t.lift_mode_ = LiftMode::kScalar;
  t.omega_low_ = omega_low;
  t.omega_high_ = omega_high;
  t.inner_ = std::make_shared<const ConvexTarget>(std::move(inner));
  return t;
}

ConvexTarget ConvexTarget::ConeLiftPerCoordinate(ConvexTarget box_inner) {
  if (box_inner.kind() != Kind::kBox) {
    throw std::invalid_argument(
        "ConeLiftPerCoordinate: inner target must be a Box");
  }
  for (int k = 0; k < box_inner.dim(); ++k) {
    if (!(box_inner.lower()[k] <= 0.0 && 0.0 <= box_inner.upper()[k]) ||
        !std::isfinite(box_inner.lower()[k]) ||
        !std::isfinite(box_inner.upper()[k])) {
      throw std::invalid_argument(
          "ConeLiftPerCoordinate: inner box must be finite and contain 0");
    }
  }
  ConvexTarget t;
  t.kind_ = Kind::kConeLift;
  t.dim_ = 2 * box_inner.dim();
  t.lift_mode_ = LiftMode::kPerCoordinate;
  t.inner_ = std::make_shared<const ConvexTarget>(std::move(box_inner));
  return t;
}

double ConvexTarget::MaxNormUpperBound(double ball_radius) const {
  switch (kind_) {
    case Kind::kBox: {
      double sq = 0.0;
      for (int k = 0; k < dim_; ++k) {
        const double lo = std::abs(lower_[k]), hi = std::abs(upper_[k]);
        double m = std::max(lo, hi);
        if (!std::isfinite(m)) m = ball_radius;
        sq += m * m;
      }
      return std::min(std::sqrt(sq), ball_radius);
    }
    case Kind::kBall:
      return std::min(Norm2(center_) + radius_, ball_radius);
    case Kind::kConeLift:
      if (lift_mode_ == LiftMode::kScalar) {
        const double inner_ub = inner_->MaxNormUpperBound(ball_radius);
        return std::min(ball_radius,
                        omega_high_ * std::sqrt(inner_ub * inner_ub + 1.0));
      }
      return ball_radius;
    case Kind::kOrthant:
    case Kind::kHalfspaceIntersection:
      return ball_radius;
  }
  return ball_radius;
}

ProjectionResult Project(const ConvexTarget& target, const Point& z) {
  CheckDim(z, target.dim(), "Project");
  CheckFinite(z, "Project");
  Point pi;
  switch (target.kind()) {
    case ConvexTarget::Kind::kOrthant:
      pi = ProjectOrthant(target.signs(), z);
      break;
    case ConvexTarget::Kind::kBox:
      pi = ProjectBox(target.lower(), target.upper(), z);
      break;
    case ConvexTarget::Kind::kBall:
      pi = ProjectBall(target.center(), target.radius(), z);
      break;
    case ConvexTarget::Kind::kHalfspaceIntersection:
      pi = ProjectHalfspaces(target.halfspaces(), z);
      break;
    case ConvexTarget::Kind::kConeLift:
      return target.lift_mode() == ConvexTarget::LiftMode::kScalar
                 ? ProjectConeLiftScalar(target, z)
                 : ProjectConeLiftPerCoordinate(target, z);
  }
  const double dist = Dist2(pi, z);
  return {std::move(pi), dist};
}

double Distance(const ConvexTarget& target, const Point& z) {
  return Project(target, z).dist;
}

double LinfDistance(const ConvexTarget& box, const Point& z) {
  if (box.kind() != ConvexTarget::Kind::kBox) {
    throw std::invalid_argument("LinfDistance: unsupported target kind");
  }
  CheckDim(z, box.dim(), "LinfDistance");
  double d = 0.0;
  for (int k = 0; k < box.dim(); ++k) {
    d = std::max(d, box.lower()[k] - z[k]);
    d = std::max(d, z[k] - box.upper()[k]);
  }
  return std::max(d, 0.0);
}

int CellAssign(const Grid& grid, const Point& q) {
  if (grid.size() == 0) throw std::invalid_argument("CellAssign: empty grid");
  const std::vector<Point>* points = &grid.points;
  if (!grid.points.empty() && q.size() != grid.points[0].size()) {
    if (!grid.reduced_points.empty() &&
        q.size() == grid.reduced_points[0].size()) {
      points = &grid.reduced_points;
    } else {
      throw std::invalid_argument("CellAssign: dimension mismatch");
    }
  }
  int best = 0;
  double best_score = kInf;
  for (int l = 0; l < grid.size(); ++l) {
    const double nu = grid.weights.empty() ? 0.0 : grid.weights[l];
    double sq = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
      const double d = q[k] - (*points)[l][k];
      sq += d * d;
    }
    const double score = sq - nu;
    if (score < best_score - 1e-15) {
      best_score = score;
      best = l;
    }
  }
  return best;
}

ProjectionResult PolytopeProject(const std::vector<Point>& vertices,
                                 const Point& z) {
  if (vertices.empty()) {
    throw std::invalid_argument("PolytopeProject: no vertices");
  }
  const int m = static_cast<int>(vertices.size());
  const int d = static_cast<int>(z.size());
  // The face containing the projection needs at most d+1 affinely
  // independent vertices, so supports beyond that size are skipped.
  const int max_support = std::min(m, d + 1);

  double best = kInf;
  Point best_point;
  std::vector<int> subset;

  auto try_subset = [&](const std::vector<int>& s) {
    const int k = static_cast<int>(s.size());
    if (k == 1) {
      const double dist = Dist2(vertices[s[0]], z);
      if (dist < best) {
        best = dist;
        best_point = vertices[s[0]];
      }
      return;
    }
    // Minimize ||V lambda - z||^2 subject to sum(lambda) = 1 via KKT.
    std::vector<Vec> kkt(k + 1, Vec(k + 1, 0.0));
    Vec rhs(k + 1, 0.0);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        kkt[i][j] = 2.0 * Dot(vertices[s[i]], vertices[s[j]]);
      }
      kkt[i][k] = 1.0;
      kkt[k][i] = 1.0;
      rhs[i] = 2.0 * Dot(vertices[s[i]], z);
    }
    rhs[k] = 1.0;
    Vec sol;
    if (!SolveLinear(kkt, rhs, &sol)) return;
    for (int i = 0; i < k; ++i) {
      if (sol[i] < -1e-10) return;
    }
    Point p(d, 0.0);
    for (int i = 0; i < k; ++i) Axpy(std::max(sol[i], 0.0), vertices[s[i]], &p);
    const double dist = Dist2(p, z);
    if (dist < best) {
      best = dist;
      best_point = std::move(p);
    }
  };

  std::function<void(int)> recurse = [&](int start) {
    if (!subset.empty()) try_subset(subset);
    if (static_cast<int>(subset.size()) == max_support) return;
    for (int i = start; i < m; ++i) {
      subset.push_back(i);
      recurse(i + 1);
      subset.pop_back();
    }
  };
  recurse(0);
  return {std::move(best_point), best};
}

SetDistanceResult TargetPolytopeDistance(const ConvexTarget& target,
                                         const std::vector<Point>& vertices,
                                         double tol, int max_iters) {
  // Alternating projections between the two sets converge to a closest pair.
  Point p = vertices[0];
  for (const Point& v : vertices) {
    if (Distance(target, v) < Distance(target, p)) p = v;
  }
  Point c = Project(target, p).point;
  double prev = kInf;
  for (int it = 0; it < max_iters; ++it) {
    p = PolytopeProject(vertices, c).point;
    c = Project(target, p).point;
    const double dist = Dist2(p, c);
    if (dist <= 1e-10 || prev - dist <= tol) {
      return {dist, std::move(c), std::move(p)};
    }
    prev = dist;
  }
  throw std::runtime_error(
      "TargetPolytopeDistance: no convergence, residual " +
      std::to_string(prev));
}

}  // namespace approachlab

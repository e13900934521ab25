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

#ifndef APPROACHLAB_GEOMETRY_H_
#define APPROACHLAB_GEOMETRY_H_

#include <limits>
#include <memory>
#include <vector>

#include "approachlab/vec.h"

namespace approachlab {

// A point of the ambient payoff space R^d.
using Point = Vec;

// A probability vector over a finite action set: entries >= 0, sum 1
// within 1e-9.
using MixedAction = Vec;

bool IsMixedAction(const MixedAction& x, double tol = 1e-9);
void CheckMixedAction(const MixedAction& x, const std::string& what);
MixedAction UniformAction(int n);

// Euclidean projection onto the probability simplex.
MixedAction SimplexProject(const Vec& v);

// Euclidean projection onto the corner simplex {q >= 0, sum(q) <= 1} used by
// the (Omega-1)-coordinate representation of the probability simplex.
Vec CornerSimplexProject(const Vec& v);

// Conversions between the full simplex in R^Omega and its
// (Omega-1)-coordinate representation: the first coordinate is dropped and
// recovered as one minus the rest, so vertex m > 0 maps to the reduced unit
// vector e_m and vertex 0 to the origin. Both directions are exact.
Vec FullToReduced(const Vec& full);
Vec ReducedToFull(const Vec& reduced);

struct Halfspace {
  Vec normal;     // a
  double offset;  // b, the halfspace is {z : <a, z> <= b}
};

// Supported closed convex target sets. ConeLift wraps an inner target E and
// represents {(z, w) : z / w in E} with either one shared ratio coordinate
// appended after the inner dimensions, or one ratio coordinate per inner
// coordinate (per-coordinate mode requires a Box inner target).
class ConvexTarget {
 public:
  enum class Kind {
    kOrthant,
    kBox,
    kBall,
    kHalfspaceIntersection,
    kConeLift,
  };
  enum class LiftMode { kScalar, kPerCoordinate };

  // signs[k] = -1 for z_k <= 0, +1 for z_k >= 0.
  static ConvexTarget Orthant(std::vector<int> signs);
  static ConvexTarget NegativeOrthant(int dim);
  // Coordinatewise bounds; +-infinity allowed.
  static ConvexTarget Box(Vec lower, Vec upper);
  static ConvexTarget Singleton(Point p);
  static ConvexTarget Ball(Point center, double radius);
  // Nonemptiness is certified by a feasible witness point.
  static ConvexTarget HalfspaceIntersection(std::vector<Halfspace> halfspaces,
                                            Point witness);
  // Scalar mode: {(z, w) in R^d x [omega_low, omega_high] : z / w in inner}.
  static ConvexTarget ConeLift(ConvexTarget inner, double omega_low,
                               double omega_high);
  // Per-coordinate mode over a Box inner target containing the origin:
  // {(z, w) in R^d x R_+^d : z_k / w_k in [lower_k, upper_k], 0/0 = 0}.
  static ConvexTarget ConeLiftPerCoordinate(ConvexTarget box_inner);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }

  const std::vector<int>& signs() const { return signs_; }
  const Vec& lower() const { return lower_; }
  const Vec& upper() const { return upper_; }
  const Point& center() const { return center_; }
  double radius() const { return radius_; }
  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }
  const Point& witness() const { return witness_; }
  const ConvexTarget& inner() const { return *inner_; }
  LiftMode lift_mode() const { return lift_mode_; }
  double omega_low() const { return omega_low_; }
  double omega_high() const { return omega_high_; }

  // Upper bound on sup{||z|| : z in target, ||z|| <= ball_radius}; used for
  // conservative constants. Never underestimates.
  double MaxNormUpperBound(double ball_radius) const;

 private:
  ConvexTarget() = default;

  Kind kind_ = Kind::kBox;
  int dim_ = 0;
  std::vector<int> signs_;
  Vec lower_, upper_;
  Point center_;
  double radius_ = 0.0;
  std::vector<Halfspace> halfspaces_;
  Point witness_;
  std::shared_ptr<const ConvexTarget> inner_;
  LiftMode lift_mode_ = LiftMode::kScalar;
  double omega_low_ = 0.0, omega_high_ = 0.0;
};

struct ProjectionResult {
  Point point;
  double dist = 0.0;
};

// Euclidean projection onto a supported target. HalfspaceIntersection uses
// Dykstra's alternating projections (tolerance 1e-10, at most 10,000 sweeps).
ProjectionResult Project(const ConvexTarget& target, const Point& z);
double Distance(const ConvexTarget& target, const Point& z);

// Exact l-infinity distance to a Box target.
double LinfDistance(const ConvexTarget& box, const Point& z);

// A finite set of points of the simplex with per-point additive weights. For
// regular grids, lattice metadata (step and integer coordinates in the
// reduced representation) is kept so neighbor structure is available.
struct Grid {
  std::vector<Point> points;  // full-simplex representation
  Vec weights;                // nu, defaults to 0

  bool regular = false;
  double step = 0.0;                          // lattice step, reduced coords
  std::vector<std::vector<int>> lattice;      // per-point integer coords
  std::vector<Point> reduced_points;          // reduced representation

  int size() const { return static_cast<int>(points.size()); }
};

// Index of the cell containing q: argmin_l ||q - p[l]||^2 - nu[l], ties
// broken by lowest index. q and the grid must use the same representation.
int CellAssign(const Grid& grid, const Point& q);

// Closest point of a V-polytope given by its vertices, solved exactly by
// active-set enumeration over supports (intended for few vertices).
ProjectionResult PolytopeProject(const std::vector<Point>& vertices,
                                 const Point& z);

// Distance between a target and a V-polytope via alternating projections,
// with the pair of closest points. Throws on non-convergence.
struct SetDistanceResult {
  double dist = 0.0;
  Point target_point;
  Point polytope_point;
};
SetDistanceResult TargetPolytopeDistance(const ConvexTarget& target,
                                         const std::vector<Point>& vertices,
                                         double tol = 1e-10,
                                         int max_iters = 200000);

}  // namespace approachlab

#endif  // APPROACHLAB_GEOMETRY_H_

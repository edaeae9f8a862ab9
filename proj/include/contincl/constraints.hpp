// Copyright 2026 The contincl Authors
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

// Constraint sets in P_p(R^d) with computable distance and projection.
//
// Support constraints Q_K = {mu : supp(mu) in K} for a closed convex K (a
// ball or a bounded polytope) have an exact distance: under any plan an atom
// at x pays at least dist(x, K), and atomwise projection pays exactly that.
// Lifted epigraphs Q_W = {mu x delta_alpha : W(mu) <= alpha} live in
// R^{d+1}; their projection only moves alpha, so their distance is an upper
// bound that is exact on membership.

#ifndef CONTINCL_CONSTRAINTS_HPP_
#define CONTINCL_CONSTRAINTS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "contincl/measure.hpp"
#include "contincl/step_function.hpp"

namespace contincl {

inline constexpr double kProjectTol = 1e-9;
inline constexpr double kDykstraTol = 1e-10;
inline constexpr std::size_t kDykstraMaxIter = 10000;

class ConstraintSet {
 public:
  virtual ~ConstraintSet() = default;

  virtual std::size_t dim() const = 0;
  virtual double distance(const DiscreteMeasure& mu) const = 0;
  virtual DiscreteMeasure project(const DiscreteMeasure& mu) const = 0;
  bool contains(const DiscreteMeasure& mu, double tol = kProjectTol) const {
    return distance(mu) <= tol;
  }

  // True when distance() is exact and the tangent cones are convex, so that
  // a direction failing the sampled cone test may be reported as a
  // violation instead of an inconclusive result.
  virtual bool certifies_violations() const = 0;

  virtual std::string describe() const = 0;
};

using ConstraintPtr = std::shared_ptr<const ConstraintSet>;

// Halfspace {x : <a, x> <= b}.
struct Halfspace {
  Point a;
  double b = 0.0;
};

// A closed convex region of R^d: a Euclidean ball or a bounded polytope.
class Region {
 public:
  static Region ball(Point center, double radius);
  // Validates nonemptiness and boundedness with linear programs.
  static Region polytope(std::vector<Halfspace> halfspaces);

  bool is_ball() const { return is_ball_; }
  std::size_t dim() const { return dim_; }
  const Point& center() const { return center_; }
  double radius() const { return radius_; }
  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }

  Point project(const Point& x) const;
  double distance(const Point& x) const;
  bool contains(const Point& x, double tol) const;
  // Halfspaces with <a, x> >= b - tol (polytope) or, for a ball, the outward
  // normal x - c when |x - c| >= r - tol. Empty for interior points.
  std::vector<Point> active_normals(const Point& x, double tol) const;
  // Radius of a centered ball containing the region.
  double bounding_radius() const { return bounding_radius_; }

 private:
  Region() = default;
  bool is_ball_ = true;
  std::size_t dim_ = 0;
  Point center_;
  double radius_ = 0.0;
  std::vector<Halfspace> halfspaces_;
  double bounding_radius_ = 0.0;
};

// (sum_i w_i dist(x_i, K)^p)^{1/p}.
double support_distance(const DiscreteMeasure& mu, const Region& k, double p);
// Atomwise Euclidean projection onto K.
DiscreteMeasure support_project(const DiscreteMeasure& mu, const Region& k);

class SupportConstraint final : public ConstraintSet {
 public:
  SupportConstraint(Region region, double p);

  const Region& region() const { return region_; }
  double p() const { return p_; }

  std::size_t dim() const override { return region_.dim(); }
  double distance(const DiscreteMeasure& mu) const override;
  DiscreteMeasure project(const DiscreteMeasure& mu) const override;
  bool certifies_violations() const override { return true; }
  std::string describe() const override;

 private:
  Region region_;
  double p_;
};

// A functional W on discrete measures of R^d.
struct MeasureFunctional {
  std::string name;
  std::function<double(const DiscreteMeasure&)> eval;
};

// W(mu) = M_2(mu)^2 = sum_i w_i |x_i|^2.
MeasureFunctional second_moment_functional();
// W(mu) = sum_i w_i U(x_i) with U(x) = sum_k c_k |x|^k.
MeasureFunctional potential_functional(std::vector<double> coefficients);

// Splits mu x delta_alpha in R^{d+1} into (mu, alpha). Throws InvalidInput
// when the atoms do not share their last coordinate.
std::pair<DiscreteMeasure, double> split_lifted(const DiscreteMeasure& lifted);
DiscreteMeasure lift(const DiscreteMeasure& mu, double alpha);

class EpigraphConstraint final : public ConstraintSet {
 public:
  EpigraphConstraint(MeasureFunctional functional, std::size_t base_dim);

  const MeasureFunctional& functional() const { return functional_; }
  std::size_t base_dim() const { return base_dim_; }

  std::size_t dim() const override { return base_dim_ + 1; }
  // max(0, W(mu) - alpha): the cost of the vertical shift.
  double distance(const DiscreteMeasure& lifted) const override;
  // Raises alpha to W(mu) when it lies below.
  DiscreteMeasure project(const DiscreteMeasure& lifted) const override;
  bool certifies_violations() const override { return false; }
  std::string describe() const override;

 private:
  MeasureFunctional functional_;
  std::size_t base_dim_;
};

// t -> Q(t) on [0, horizon] with a left absolute-continuity modulus m_Q:
// Delta(Q(s); Q(t)) <= int_s^t m_Q for s <= t.
class ConstraintTube {
 public:
  using Sampler = std::function<ConstraintPtr(double t)>;

  ConstraintTube(Sampler sampler, StepFunction modulus, double horizon,
                 std::string description);

  static ConstraintTube constant(ConstraintPtr set, double horizon);
  // Support constraint on the ball B(center, r0 + rate t); requires the
  // radius to stay positive on [0, horizon].
  static ConstraintTube linear_ball(Point center, double r0, double rate,
                                    double horizon, double p);

  ConstraintPtr at(double t) const;
  const StepFunction& modulus() const { return modulus_; }
  double horizon() const { return horizon_; }
  const std::string& describe() const { return description_; }

 private:
  Sampler sampler_;
  StepFunction modulus_;
  double horizon_;
  std::string description_;
};

ConstraintPtr tube_at(const ConstraintTube& tube, double t);

struct TubeAcReport {
  std::size_t pairs = 0;
  // Largest dist(mu; Q(t)) / int_s^t m_Q over sampled mu in Q(s), s < t
  // (0 when the modulus integral vanishes and the distance does too).
  double max_rate = 0.0;
  double max_excess = 0.0;  // largest dist - (1 + slack) int m_Q
  bool passed = true;
};

// Samples `pairs` time pairs s < t and, for each, `probes` measures in Q(s)
// (projections of random measures), checking the one-sided estimate
// dist(mu; Q(t)) <= int_s^t m_Q with relative slack.
TubeAcReport tube_left_ac_check(const ConstraintTube& tube, std::size_t pairs,
                                std::size_t probes, std::uint64_t seed,
                                double slack = 0.05);

}  // namespace contincl

#endif  // CONTINCL_CONSTRAINTS_HPP_

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

#include "contincl/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "contincl/errors.hpp"
#include "contincl/lp.hpp"
#include "contincl/rng.hpp"

namespace contincl {
namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

// Optimizes +-x_c over the polytope with x split into positive and negative
// parts.
LpResult polytope_lp(const std::vector<Halfspace>& hs, std::size_t d,
                     std::size_t coord, double sign) {
  LinearProgram lp;
  lp.objective.assign(2 * d, 0.0);
  if (coord < d) {
    lp.objective[coord] = sign;
    lp.objective[d + coord] = -sign;
  }
  for (const auto& h : hs) {
    std::vector<double> row(2 * d);
    for (std::size_t c = 0; c < d; ++c) {
      row[c] = h.a[c];
      row[d + c] = -h.a[c];
    }
    lp.a_ub.push_back(std::move(row));
    lp.b_ub.push_back(h.b);
  }
  return solve_lp(lp);
}

}  // namespace

Region Region::ball(Point center, double radius) {
  if (center.empty()) throw InvalidInput("ball: empty center");
  if (!all_finite(center) || !(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidInput("ball: need a finite center and a positive radius");
  }
  Region r;
  r.is_ball_ = true;
  r.dim_ = center.size();
  r.bounding_radius_ = norm(center) + radius;
  r.center_ = std::move(center);
  r.radius_ = radius;
  return r;
}

Region Region::polytope(std::vector<Halfspace> halfspaces) {
  if (halfspaces.empty()) throw InvalidInput("polytope: no halfspaces");
  const std::size_t d = halfspaces.front().a.size();
  if (d == 0) throw InvalidInput("polytope: zero dimension");
  for (auto& h : halfspaces) {
    if (h.a.size() != d) throw InvalidInput("polytope: inconsistent normals");
    const double n = norm(h.a);
    if (!(n > 0.0) || !all_finite(h.a) || !std::isfinite(h.b)) {
      throw InvalidInput("polytope: halfspace normals must be finite, nonzero");
    }
    h.a = scale(h.a, 1.0 / n);
    h.b /= n;
  }
  if (polytope_lp(halfspaces, d, d, 1.0).status != LpStatus::kOptimal) {
    throw InvalidInput("polytope: region is empty");
  }
  double bound = 0.0;
  for (std::size_t c = 0; c < d; ++c) {
    double extent = 0.0;
    for (double sign : {1.0, -1.0}) {
      const LpResult r = polytope_lp(halfspaces, d, c, sign);
      if (r.status != LpStatus::kOptimal) {
        throw InvalidInput("polytope: region is unbounded");
      }
      extent = std::max(extent, std::abs(r.value));
    }
    bound += extent * extent;
  }
  Region r;
  r.is_ball_ = false;
  r.dim_ = d;
  r.halfspaces_ = std::move(halfspaces);
  r.bounding_radius_ = std::sqrt(bound);
  return r;
}

bool Region::contains(const Point& x, double tol) const {
  if (is_ball_) return distance(x) <= tol;
  for (const auto& h : halfspaces_) {
    if (dot(h.a, x) > h.b + tol) return false;
  }
  return true;
}

Point Region::project(const Point& x) const {
  if (x.size() != dim_) throw InvalidInput("Region: point dimension mismatch");
  if (is_ball_) {
    const Point off = sub(x, center_);
    const double r = norm(off);
    if (r <= radius_) return x;
    return axpy(center_, radius_ / r, off);
  }
  if (contains(x, 0.0)) return x;
  // Dykstra's alternating projections onto the halfspaces.
  const std::size_t m = halfspaces_.size();
  std::vector<Point> incr(m, Point(dim_, 0.0));
  Point y = x;
  for (std::size_t iter = 0; iter < kDykstraMaxIter; ++iter) {
    double change = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const Halfspace& h = halfspaces_[i];
      const Point z = add(y, incr[i]);
      const double excess = dot(h.a, z) - h.b;
      Point next = excess > 0.0 ? axpy(z, -excess, h.a) : z;
      incr[i] = sub(z, next);
      change = std::max(change, norm(sub(next, y)));
      y = std::move(next);
    }
    double violation = 0.0;
    for (const auto& h : halfspaces_) {
      violation = std::max(violation, dot(h.a, y) - h.b);
    }
    if (violation <= kDykstraTol && change <= kDykstraTol * 1e-2) return y;
  }
  throw NumericalFailure("polytope projection did not converge in " +
                         std::to_string(kDykstraMaxIter) + " sweeps");
}

double Region::distance(const Point& x) const {
  if (is_ball_) return std::max(0.0, norm(sub(x, center_)) - radius_);
  return norm(sub(x, project(x)));
}

std::vector<Point> Region::active_normals(const Point& x, double tol) const {
  std::vector<Point> out;
  if (is_ball_) {
    const Point off = sub(x, center_);
    if (norm(off) >= radius_ - tol) out.push_back(off);
    return out;
  }
  for (const auto& h : halfspaces_) {
    if (dot(h.a, x) >= h.b - tol) out.push_back(h.a);
  }
  return out;
}

double support_distance(const DiscreteMeasure& mu, const Region& k, double p) {
  require_p(p);
  if (mu.dim() != k.dim()) {
    throw InvalidInput("support_distance: dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    s += mu.weight(i) * std::pow(k.distance(mu.point(i)), p);
  }
  return std::pow(s, 1.0 / p);
}

DiscreteMeasure support_project(const DiscreteMeasure& mu, const Region& k) {
  if (mu.dim() != k.dim()) {
    throw InvalidInput("support_project: dimension mismatch");
  }
  std::vector<Point> pts;
  pts.reserve(mu.size());
  for (const Point& x : mu.points()) pts.push_back(k.project(x));
  return DiscreteMeasure(std::move(pts), mu.weights());
}

SupportConstraint::SupportConstraint(Region region, double p)
    : region_(std::move(region)), p_(p) {
  require_p(p_);
}

double SupportConstraint::distance(const DiscreteMeasure& mu) const {
  return support_distance(mu, region_, p_);
}

DiscreteMeasure SupportConstraint::project(const DiscreteMeasure& mu) const {
  return support_project(mu, region_);
}

std::string SupportConstraint::describe() const {
  if (region_.is_ball()) {
    return "support-ball(radius=" + fmt(region_.radius()) + ")";
  }
  return "support-polytope(" + std::to_string(region_.halfspaces().size()) +
         " halfspaces)";
}

MeasureFunctional second_moment_functional() {
  return {"second-moment", [](const DiscreteMeasure& mu) {
            double s = 0.0;
            for (std::size_t i = 0; i < mu.size(); ++i) {
              s += mu.weight(i) * dot(mu.point(i), mu.point(i));
            }
            return s;
          }};
}

MeasureFunctional potential_functional(std::vector<double> coefficients) {
  if (coefficients.empty()) {
    throw InvalidInput("potential functional: no coefficients");
  }
  return {"potential", [c = std::move(coefficients)](const DiscreteMeasure& mu) {
            double s = 0.0;
            for (std::size_t i = 0; i < mu.size(); ++i) {
              const double r = norm(mu.point(i));
              double u = 0.0;
              for (std::size_t k = c.size(); k-- > 0;) u = u * r + c[k];
              s += mu.weight(i) * u;
            }
            return s;
          }};
}

std::pair<DiscreteMeasure, double> split_lifted(const DiscreteMeasure& lifted) {
  if (lifted.dim() < 2) {
    throw InvalidInput("lifted measure needs dimension >= 2");
  }
  const std::size_t d = lifted.dim() - 1;
  const double alpha = lifted.point(0)[d];
  std::vector<Point> pts;
  pts.reserve(lifted.size());
  for (const Point& x : lifted.points()) {
    if (std::abs(x[d] - alpha) > 1e-12) {
      throw InvalidInput("lifted measure: atoms have inconsistent alpha");
    }
    pts.emplace_back(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(d));
  }
  return {DiscreteMeasure(std::move(pts), lifted.weights()), alpha};
}

DiscreteMeasure lift(const DiscreteMeasure& mu, double alpha) {
  std::vector<Point> pts = mu.points();
  for (Point& x : pts) x.push_back(alpha);
  return DiscreteMeasure(std::move(pts), mu.weights());
}

EpigraphConstraint::EpigraphConstraint(MeasureFunctional functional,
                                       std::size_t base_dim)
    : functional_(std::move(functional)), base_dim_(base_dim) {
  if (base_dim_ == 0) throw InvalidInput("epigraph: zero base dimension");
  if (!functional_.eval) throw InvalidInput("epigraph: empty functional");
}

double EpigraphConstraint::distance(const DiscreteMeasure& lifted) const {
  if (lifted.dim() != dim()) throw InvalidInput("epigraph: dimension mismatch");
  const auto [mu, alpha] = split_lifted(lifted);
  return std::max(0.0, functional_.eval(mu) - alpha);
}

DiscreteMeasure EpigraphConstraint::project(const DiscreteMeasure& lifted) const {
  if (lifted.dim() != dim()) throw InvalidInput("epigraph: dimension mismatch");
  const auto [mu, alpha] = split_lifted(lifted);
  const double w = functional_.eval(mu);
  if (w <= alpha) return lifted;
  return lift(mu, w);
}

std::string EpigraphConstraint::describe() const {
  return "epigraph(" + functional_.name + ")";
}

ConstraintTube::ConstraintTube(Sampler sampler, StepFunction modulus,
                               double horizon, std::string description)
    : sampler_(std::move(sampler)), modulus_(std::move(modulus)),
      horizon_(horizon), description_(std::move(description)) {
  if (!sampler_) throw InvalidInput("ConstraintTube: empty sampler");
  if (!(horizon_ > 0.0)) throw InvalidInput("ConstraintTube: horizon must be > 0");
}

ConstraintTube ConstraintTube::constant(ConstraintPtr set, double horizon) {
  if (!set) throw InvalidInput("ConstraintTube: null set");
  const std::string desc = "static " + set->describe();
  return ConstraintTube([set](double) { return set; }, StepFunction(0.0),
                        horizon, desc);
}

ConstraintTube ConstraintTube::linear_ball(Point center, double r0,
                                           double rate, double horizon,
                                           double p) {
  if (!(r0 > 0.0) || !(r0 + rate * horizon > 0.0)) {
    throw InvalidInput("ball tube: radius must stay positive on the horizon");
  }
  // A member of Q(s) moves at most (r(s) - r(t))_+ to reach Q(t).
  const double mod = std::max(0.0, -rate);
  const std::string desc = "ball tube(r0=" + fmt(r0) + ", rate=" + fmt(rate) + ")";
  return ConstraintTube(
      [center = std::move(center), r0, rate, p](double t) -> ConstraintPtr {
        return std::make_shared<SupportConstraint>(
            Region::ball(center, r0 + rate * t), p);
      },
      StepFunction(mod), horizon, desc);
}

ConstraintPtr ConstraintTube::at(double t) const {
  const double tc = std::clamp(t, 0.0, horizon_);
  ConstraintPtr q = sampler_(tc);
  if (!q) throw InvalidInput("ConstraintTube: sampler returned null");
  return q;
}

ConstraintPtr tube_at(const ConstraintTube& tube, double t) {
  return tube.at(t);
}

TubeAcReport tube_left_ac_check(const ConstraintTube& tube, std::size_t pairs,
                                std::size_t probes, std::uint64_t seed,
                                double slack) {
  TubeAcReport report;
  SplitMix64 rng = SplitMix64::stream(seed, 0);
  const std::size_t d = tube.at(0.0)->dim();
  for (std::size_t k = 0; k < pairs; ++k) {
    double s = rng.uniform(0.0, tube.horizon());
    double t = rng.uniform(0.0, tube.horizon());
    if (s > t) std::swap(s, t);
    if (t == s) continue;
    const ConstraintPtr qs = tube.at(s);
    const ConstraintPtr qt = tube.at(t);
    const double budget = tube.modulus().integral(s, t);
    for (std::size_t j = 0; j < probes; ++j) {
      const std::size_t n = 1 + rng.index(4);
      std::vector<Point> pts(n, Point(d));
      for (Point& x : pts) {
        for (double& c : x) c = rng.uniform(-3.0, 3.0);
      }
      const DiscreteMeasure mu =
          qs->project(DiscreteMeasure(std::move(pts), rng.dirichlet(n)));
      const double dist = qt->distance(mu);
      if (budget > 0.0) {
        report.max_rate = std::max(report.max_rate, dist / budget);
      } else if (dist > 0.0) {
        report.max_rate = std::numeric_limits<double>::infinity();
      }
      const double excess = dist - (1.0 + slack) * budget;
      report.max_excess = std::max(report.max_excess, excess);
      if (excess > 1e-12) report.passed = false;
    }
    ++report.pairs;
  }
  return report;
}

}  // namespace contincl

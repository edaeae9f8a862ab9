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

#include "contincl/cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "contincl/errors.hpp"

namespace contincl {

std::string to_string(ConeVerdict v) {
  switch (v) {
    case ConeVerdict::kMember:
      return "member";
    case ConeVerdict::kNonMember:
      return "non-member";
    case ConeVerdict::kInconclusive:
      break;
  }
  return "inconclusive";
}

std::vector<double> default_h_grid() {
  std::vector<double> h;
  for (int k = 1; k <= 16; ++k) h.push_back(std::ldexp(1.0, -k));
  return h;
}

ConeReport classify_quotients(std::vector<std::pair<double, double>> q,
                              double tol) {
  if (q.empty()) throw InvalidInput("cone probe: empty h-grid");
  ConeReport r;
  r.tol = tol;
  r.quotients = std::move(q);
  const std::size_t n = r.quotients.size();
  const std::size_t start = n / 2;
  r.min_quotient = std::numeric_limits<double>::infinity();
  bool large = true;
  bool steady = true;
  for (std::size_t i = start; i < n; ++i) {
    const double v = r.quotients[i].second;
    r.min_quotient = std::min(r.min_quotient, v);
    if (v < 10.0 * tol) large = false;
    if (i > start && v < 0.95 * r.quotients[i - 1].second) steady = false;
  }
  if (r.min_quotient <= tol) {
    r.verdict = ConeVerdict::kMember;
  } else if (large && steady) {
    r.verdict = ConeVerdict::kNonMember;
  } else {
    r.verdict = ConeVerdict::kInconclusive;
  }
  return r;
}

namespace {

void check_h_grid(const std::vector<double>& h) {
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0) || (i > 0 && !(h[i] < h[i - 1]))) {
      throw InvalidInput("cone probe: h-grid must be positive and decreasing");
    }
  }
}

}  // namespace

ConeReport contingent_quotient(const DiscreteMeasure& mu, const SampledMap& xi,
                               const ConstraintSet& q,
                               const std::vector<double>& h_grid, double tol,
                               double member_tol) {
  check_h_grid(h_grid);
  require_same_base(mu, xi);
  const double d0 = q.distance(mu);
  if (d0 > member_tol) {
    throw ConstraintViolation("cone probe: measure is not in the set (dist " +
                              std::to_string(d0) + ")");
  }
  std::vector<std::pair<double, double>> out;
  for (double h : h_grid) {
    out.emplace_back(h, q.distance(displace(mu, xi, h)) / h);
  }
  return classify_quotients(std::move(out), tol);
}

AdjacentReport adjacent_membership_support(const DiscreteMeasure& mu,
                                           const SampledMap& xi,
                                           const Region& k, double tol) {
  require_same_base(mu, xi);
  AdjacentReport r;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const Point& x = mu.point(i);
    if (k.distance(x) > tol) {
      throw ConstraintViolation("adjacent test: atom " + std::to_string(i) +
                                " lies outside K");
    }
    bool ok = true;
    for (const Point& n : k.active_normals(x, tol)) {
      const double len = norm(n);
      if (len == 0.0) continue;
      if (dot(xi.value(i), n) / len > tol) ok = false;
    }
    r.per_atom.push_back(ok);
    r.all = r.all && ok;
  }
  return r;
}

ConeReport graph_contingent_quotient(double t, const DiscreteMeasure& mu,
                                     const TangentDirection& dir,
                                     const ConstraintTube& tube,
                                     const std::vector<double>& h_grid,
                                     const std::vector<double>& bracket,
                                     double tol, double member_tol) {
  check_h_grid(h_grid);
  require_same_base(mu, dir.xi);
  if (bracket.empty()) throw InvalidInput("graph cone probe: empty bracket");
  const double d0 = tube.at(t)->distance(mu);
  if (d0 > member_tol) {
    throw ConstraintViolation("graph cone probe: measure is not in Q(t) (dist " +
                              std::to_string(d0) + ")");
  }
  std::vector<std::pair<double, double>> out;
  for (double h : h_grid) {
    const DiscreteMeasure moved = displace(mu, dir.xi, h);
    double best = std::numeric_limits<double>::infinity();
    for (double b : bracket) {
      const double zeta = dir.zeta + b * h;
      const double s = std::clamp(t + h * zeta, 0.0, tube.horizon());
      best = std::min(best, tube.at(s)->distance(moved));
    }
    out.emplace_back(h, best / h);
  }
  return classify_quotients(std::move(out), tol);
}

double lower_dir_derivative(const MeasureFunctional& w,
                            const DiscreteMeasure& mu, const SampledMap& xi,
                            const std::vector<double>& h_grid) {
  check_h_grid(h_grid);
  require_same_base(mu, xi);
  const double w0 = w.eval(mu);
  if (!std::isfinite(w0)) {
    throw InvalidInput("lower_dir_derivative: functional is not finite at mu");
  }
  double best = std::numeric_limits<double>::infinity();
  for (double h : h_grid) {
    best = std::min(best, (w.eval(displace(mu, xi, h)) - w0) / h);
  }
  return best;
}

EpigraphConeResult epigraph_cone_test(const MeasureFunctional& w,
                                      const DiscreteMeasure& mu, double alpha,
                                      const SampledMap& xi, double rho,
                                      double tol,
                                      const std::vector<double>& h_grid,
                                      double boundary_tol) {
  const double w0 = w.eval(mu);
  const double btol = boundary_tol * std::max(1.0, std::abs(w0));
  if (alpha < w0 - btol) {
    throw ConstraintViolation("epigraph cone test: alpha < W(mu)");
  }
  EpigraphConeResult r;
  if (alpha > w0 + btol) {
    r.member = true;
    return r;
  }
  r.boundary = true;
  r.derivative = lower_dir_derivative(w, mu, xi, h_grid);
  r.member = r.derivative <= rho + tol;
  return r;
}

}  // namespace contincl

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

#include "contincl/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "contincl/errors.hpp"
#include "contincl/parallel.hpp"
#include "contincl/rng.hpp"
#include "contincl/transport.hpp"

namespace contincl {

Point duality_map(std::span<const double> v, double p) {
  require_p(p);
  const double n = norm(v);
  if (n == 0.0) return Point(v.size(), 0.0);
  return scale(v, std::pow(n, p - 2.0));
}

double remainder(double h, double norm_zeta, double norm_xi, double wdist,
                 double p) {
  require_p(p);
  const double ah = std::abs(h);
  if (p >= 2.0) {
    const double base = wdist + ah * (norm_zeta + norm_xi);
    const double quad = (norm_zeta * norm_zeta + norm_xi * norm_xi) * h * h;
    if (quad == 0.0) return 0.0;
    return (p - 1.0) * std::pow(base, p - 2.0) * quad;
  }
  return 2.0 / (p - 1.0) *
         (std::pow(norm_zeta, p) + std::pow(norm_xi, p)) * std::pow(ah, p);
}

SuperdiffTerms superdiff_terms(const DiscreteMeasure& mu,
                               const DiscreteMeasure& nu,
                               const SampledMap& zeta, const SampledMap& xi,
                               double h, double p) {
  require_p(p);
  if (mu.dim() != nu.dim()) {
    throw InvalidInput("superdiff_gap: dimension mismatch");
  }
  require_same_base(mu, zeta);
  require_same_base(nu, xi);
  const WassersteinResult base = wasserstein(mu, nu, p);
  const double base_cost = std::pow(base.distance, p);
  const DiscreteMeasure mu_h = displace(mu, zeta, h);
  const DiscreteMeasure nu_h = displace(nu, xi, h);
  const double moved_cost = std::pow(wasserstein_distance(mu_h, nu_h, p), p);

  SuperdiffTerms t;
  t.lhs = moved_cost / p - base_cost / p;
  double integral = 0.0;
  for (const auto& e : base.plan.entries()) {
    const Point diff = sub(mu.point(e.source_idx), nu.point(e.target_idx));
    const Point dv = sub(zeta.value(e.source_idx), xi.value(e.target_idx));
    integral += e.mass * dot(dv, duality_map(diff, p));
  }
  t.linear = h * integral;
  t.remainder = remainder(h, lp_seminorm(mu, zeta, p), lp_seminorm(nu, xi, p),
                          base.distance, p);
  t.gap = t.lhs - t.linear - t.remainder;
  return t;
}

double superdiff_gap(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                     const SampledMap& zeta, const SampledMap& xi, double h,
                     double p) {
  return superdiff_terms(mu, nu, zeta, xi, h, p).gap;
}

double pnorm_bound(std::span<const double> x, std::span<const double> y,
                   double p) {
  require_p(p);
  const double r = distance(x, y);
  if (p < 2.0) return std::pow(2.0, 2.0 - p) / (p - 1.0) * std::pow(r, p);
  const double big = std::max(norm(x), norm(y));
  if (r == 0.0) return 0.0;
  return 0.5 * (p - 1.0) * r * r * std::pow(big, p - 2.0);
}

double pnorm_gap(std::span<const double> x, std::span<const double> y,
                 double p) {
  const Point jx = duality_map(x, p);
  const Point dyx = sub(y, x);
  return std::pow(norm(y), p) / p - std::pow(norm(x), p) / p - dot(dyx, jx) -
         pnorm_bound(x, y, p);
}

namespace {

Point random_in_ball(SplitMix64& rng, std::size_t d, double radius) {
  Point v(d);
  for (double& c : v) c = rng.normal();
  const double n = norm(v);
  const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
  if (n == 0.0) return Point(d, 0.0);
  return scale(v, r / n);
}

DiscreteMeasure random_measure(SplitMix64& rng, std::size_t d, std::size_t n) {
  std::vector<Point> pts(n);
  for (Point& x : pts) x = random_in_ball(rng, d, 2.0);
  return DiscreteMeasure(std::move(pts), rng.dirichlet(n));
}

}  // namespace

InequalityReport verify_inequalities(std::uint64_t seed, std::size_t instances,
                                     std::size_t pnorm_pairs) {
  static constexpr double kExponents[] = {1.5, 2.0, 3.0};
  std::vector<double> gaps(instances, 0.0);
  std::vector<int> branch(instances, 0);
  parallel_for(instances, [&](std::size_t k) {
    SplitMix64 rng = SplitMix64::stream(seed, k);
    const std::size_t d = 1 + rng.index(3);
    const double p = kExponents[rng.index(3)];
    const DiscreteMeasure mu = random_measure(rng, d, 1 + rng.index(8));
    const DiscreteMeasure nu = random_measure(rng, d, 1 + rng.index(8));
    // Values in the ball of radius 2 keep both L^p norms at most 2.
    const SampledMap zeta = SampledMap::from_function(
        mu, [&](const Point&) { return random_in_ball(rng, d, 2.0); });
    const SampledMap xi = SampledMap::from_function(
        nu, [&](const Point&) { return random_in_ball(rng, d, 2.0); });
    const double h = rng.uniform(-1.0, 1.0);
    gaps[k] = superdiff_gap(mu, nu, zeta, xi, h, p);
    branch[k] = p >= 2.0 ? 1 : 2;
  });

  InequalityReport report;
  report.instances = instances;
  report.max_gap = instances == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < instances; ++k) {
    report.max_gap = std::max(report.max_gap, gaps[k]);
    ++report.branch_counts[branch[k] == 1 ? "remainder_p_ge_2"
                                          : "remainder_p_lt_2"];
  }

  // Pointwise estimate, one batch per branch.
  SplitMix64 rng = SplitMix64::stream(seed, instances + 1);
  report.max_pnorm_gap = -std::numeric_limits<double>::infinity();
  for (int br = 0; br < 2; ++br) {
    for (std::size_t k = 0; k < pnorm_pairs; ++k) {
      const double p = br == 0 ? rng.uniform(1.05, 2.0)
                               : rng.uniform(2.0, 4.0);
      const std::size_t d = 1 + rng.index(3);
      const Point x = random_in_ball(rng, d, 2.0);
      const Point y = random_in_ball(rng, d, 2.0);
      report.max_pnorm_gap = std::max(report.max_pnorm_gap, pnorm_gap(x, y, p));
    }
    report.branch_counts[br == 0 ? "pnorm_p_lt_2" : "pnorm_p_ge_2"] +=
        pnorm_pairs;
  }
  if (pnorm_pairs == 0) report.max_pnorm_gap = 0.0;
  return report;
}

}  // namespace contincl

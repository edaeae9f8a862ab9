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

// First-order calculus on (P_p, W_p): duality maps, the explicit remainder
// of the joint superdifferentiability inequality for (1/p) W_p^p, and the
// pointwise inequalities on |x|^p it is built from.

#ifndef CONTINCL_CALCULUS_HPP_
#define CONTINCL_CALCULUS_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>

#include "contincl/measure.hpp"

namespace contincl {

// j_p(v) = |v|^{p-2} v, and 0 at v = 0.
Point duality_map(std::span<const double> v, double p);

// Explicit remainder r_p(h, zeta, xi) given ||zeta||_{L^p}, ||xi||_{L^p} and
// W = W_p(mu, nu). For p >= 2:
//   (p-1) (W + |h| (a + b))^{p-2} (a^2 + b^2) h^2,
// for 1 < p < 2:
//   2/(p-1) (a^p + b^p) |h|^p.
// Both formulas hold at p = 2; the first, smaller one is used there.
double remainder(double h, double norm_zeta, double norm_xi, double wdist,
                 double p);

struct SuperdiffTerms {
  double lhs = 0.0;        // (1/p)W_p^p(displaced) - (1/p)W_p^p(mu, nu)
  double linear = 0.0;     // h int <zeta(x) - xi(y), j_p(x - y)> dgamma
  double remainder = 0.0;  // r_p
  double gap = 0.0;        // lhs - linear - remainder, <= 0 in theory
};

// Evaluates the superdifferentiability inequality at step h with zeta
// sampled on mu and xi on nu, using an optimal plan from the exact solver.
SuperdiffTerms superdiff_terms(const DiscreteMeasure& mu,
                               const DiscreteMeasure& nu,
                               const SampledMap& zeta, const SampledMap& xi,
                               double h, double p);
double superdiff_gap(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                     const SampledMap& zeta, const SampledMap& xi, double h,
                     double p);

// Right-hand side of the pointwise estimate on powers of the norm:
//   2^{2-p}/(p-1) |x-y|^p                    for 1 < p < 2,
//   (p-1)/2 |x-y|^2 max(|x|,|y|)^{p-2}       for p >= 2.
double pnorm_bound(std::span<const double> x, std::span<const double> y,
                   double p);

// (1/p)|y|^p - (1/p)|x|^p - <y - x, j_p(x)> - pnorm_bound(x, y, p).
double pnorm_gap(std::span<const double> x, std::span<const double> y,
                 double p);

struct InequalityReport {
  std::size_t instances = 0;
  double max_gap = 0.0;          // over superdifferentiability instances
  double max_pnorm_gap = 0.0;    // over pointwise instances
  std::map<std::string, std::size_t> branch_counts;
};

// Random batch: `instances` superdifferentiability checks (d in {1,2,3},
// up to 8 atoms, p in {1.5, 2, 3}, |h| <= 1, ||zeta||, ||xi|| <= 2) and
// `pnorm_pairs` pointwise checks per branch. Deterministic in `seed`.
InequalityReport verify_inequalities(std::uint64_t seed, std::size_t instances,
                                     std::size_t pnorm_pairs = 10000);

}  // namespace contincl

#endif  // CONTINCL_CALCULUS_HPP_

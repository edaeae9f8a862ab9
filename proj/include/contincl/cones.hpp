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

// Finite-h probes of contingent cones in P_p(R^d).
//
// A liminf cannot be computed, so every probe evaluates the difference
// quotient dist((Id + h xi)#mu; Q)/h on a decreasing geometric h-grid and
// returns one of three verdicts. Verdicts are read off the small-h tail of
// the grid, the last half of it: "member" when the tail minimum is at most
// tol, "non-member" when every tail quotient is at least 10 tol and the
// tail does not decay (each quotient at least 95% of the previous one),
// "inconclusive" otherwise.

#ifndef CONTINCL_CONES_HPP_
#define CONTINCL_CONES_HPP_

#include <string>
#include <utility>
#include <vector>

#include "contincl/constraints.hpp"
#include "contincl/measure.hpp"

namespace contincl {

inline constexpr double kConeTol = 1e-3;
inline constexpr double kMemberTol = 1e-9;

enum class ConeVerdict { kMember, kNonMember, kInconclusive };
std::string to_string(ConeVerdict v);

struct TangentDirection {
  double zeta = 0.0;
  SampledMap xi;
};

struct ConeReport {
  std::vector<std::pair<double, double>> quotients;  // (h, dist / h)
  ConeVerdict verdict = ConeVerdict::kInconclusive;
  double tol = kConeTol;
  double min_quotient = 0.0;  // over the tail
};

// 2^-1, 2^-2, ..., 2^-16.
std::vector<double> default_h_grid();

// Applies the verdict rule above to (h, quotient) pairs in grid order.
ConeReport classify_quotients(std::vector<std::pair<double, double>> q,
                              double tol);

// Stationary contingent-cone probe of xi at mu in Q. Throws
// ConstraintViolation when dist(mu; Q) > member_tol.
ConeReport contingent_quotient(const DiscreteMeasure& mu, const SampledMap& xi,
                               const ConstraintSet& q,
                               const std::vector<double>& h_grid = default_h_grid(),
                               double tol = kConeTol,
                               double member_tol = kMemberTol);

struct AdjacentReport {
  std::vector<bool> per_atom;
  bool all = true;
};

// Closed-form test of xi(x_i) in the tangent cone T_K(x_i) for each atom:
// always true inside K, <xi, n> <= tol for every active unit normal n on
// the boundary. By the characterization of adjacent directions to Q_K,
// all == true means xi is adjacent to Q_K at mu.
AdjacentReport adjacent_membership_support(const DiscreteMeasure& mu,
                                           const SampledMap& xi,
                                           const Region& k, double tol = 1e-9);

// Graph-cone probe of (zeta, xi) at (t, mu) for the tube: for each h the
// quotient is minimized over times t + h zeta_i, zeta_i in
// zeta + {0, +-h, +-2h} (scaled by `bracket`), clamped to [0, horizon].
ConeReport graph_contingent_quotient(
    double t, const DiscreteMeasure& mu, const TangentDirection& dir,
    const ConstraintTube& tube,
    const std::vector<double>& h_grid = default_h_grid(),
    const std::vector<double>& bracket = {0.0, 1.0, -1.0, 2.0, -2.0},
    double tol = kConeTol, double member_tol = kMemberTol);

// min over h in the grid of (W((Id + h xi)#mu) - W(mu)) / h. The nearby
// measures of the general definition are restricted to the pushforward
// itself, which is exact for the smooth built-in functionals.
double lower_dir_derivative(const MeasureFunctional& w,
                            const DiscreteMeasure& mu, const SampledMap& xi,
                            const std::vector<double>& h_grid = default_h_grid());

struct EpigraphConeResult {
  bool member = false;
  bool boundary = false;      // alpha = W(mu) within boundary_tol
  double derivative = 0.0;    // lower_dir_derivative, when on the boundary
};

// Contingent membership of (xi, rho) at mu x delta_alpha in the lifted
// epigraph. On the boundary this is D W(mu)(xi) <= rho (up to tol); above
// it every direction is tangent because built-in functionals are finite
// everywhere. Throws ConstraintViolation when alpha < W(mu).
EpigraphConeResult epigraph_cone_test(
    const MeasureFunctional& w, const DiscreteMeasure& mu, double alpha,
    const SampledMap& xi, double rho, double tol = kConeTol,
    const std::vector<double>& h_grid = default_h_grid(),
    double boundary_tol = 1e-9);

}  // namespace contincl

#endif  // CONTINCL_CONES_HPP_

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

// Sampled viability and invariance checks for continuity inclusions, a
// constructive viable-curve builder and Gronwall monitoring of the distance
// g(t) = dist(mu(t); Q(t)).
//
// "Almost every t" becomes a finite set of sample times and the closed
// convex hull of the tangent cone is probed through finitely many
// candidate velocities, so a "satisfied" report is evidence, not proof.
// Violations are only reported for sets whose cone probes are decisive
// (ConstraintSet::certifies_violations); otherwise failures come back as
// inconclusive. Left absolutely continuous tubes go through the same
// sampled checkers as absolutely continuous ones.

#ifndef CONTINCL_VIABILITY_HPP_
#define CONTINCL_VIABILITY_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "contincl/cones.hpp"
#include "contincl/constraints.hpp"
#include "contincl/dynamics.hpp"

namespace contincl {

enum class CheckVerdict { kSatisfied, kViolated, kInconclusive };
std::string to_string(CheckVerdict v);

enum class ConeMode { kStationary, kGraph };

struct StateSample {
  double t = 0.0;
  DiscreteMeasure mu;
};

struct SampleHit {
  double t = 0.0;
  std::size_t sample = 0;
  ConeVerdict verdict = ConeVerdict::kInconclusive;
  int witness = -1;             // generator index, or -1
  std::vector<double> weights;  // witnessing convex weights (may be empty)
  double min_quotient = 0.0;    // best tail quotient over candidates
  std::size_t candidates = 0;   // candidates probed
};

struct ViabilityReport {
  std::vector<SampleHit> hits;
  CheckVerdict verdict = CheckVerdict::kInconclusive;
  std::vector<std::string> notes;
};

struct CheckOptions {
  ConeMode mode = ConeMode::kStationary;
  std::size_t simplex_resolution = 5;
  std::size_t max_simplex_generators = 4;
  std::vector<double> h_grid = default_h_grid();
  double cone_tol = kConeTol;
  double member_tol = 1e-9;
};

// n Chebyshev-Lobatto-like times cos-spaced on [t0, t1].
std::vector<double> chebyshev_times(double t0, double t1, std::size_t n = 32);

// Deterministic sample states: for each time, `per_time` projections onto
// Q(t) of seeded random measures in the box [-scale, scale]^d, so that
// boundary and interior states both occur.
std::vector<StateSample> sample_states(const ConstraintTube& tube,
                                       const std::vector<double>& times,
                                       std::size_t per_time,
                                       std::uint64_t seed, double scale = 2.0,
                                       std::size_t max_atoms = 4);

// Sufficient viability condition: at each sample some velocity of V(t, mu)
// (a generator, then a simplex grid of convex weights when convexified and
// K <= max_simplex_generators) passes the cone probe; in graph mode the
// probed direction is (1, v).
ViabilityReport check_viability_condition(const SetValuedField& field,
                                          const ConstraintTube& tube,
                                          const std::vector<StateSample>& samples,
                                          const CheckOptions& options = {});

// Invariance condition: every generator passes the cone probe at every
// sample (the convex hull then lies in the closed convex hull of the cone).
ViabilityReport check_invariance_condition(
    const SetValuedField& field, const ConstraintTube& tube,
    const std::vector<StateSample>& samples, const CheckOptions& options = {});

struct DistanceTrace {
  std::vector<double> times;
  std::vector<double> g_values;
  std::vector<double> bound_values;
};

struct ViableCurveOptions {
  std::size_t levels = 5;            // 2^levels dyadic subintervals
  std::size_t candidates = 16;       // vertices first, then Dirichlet draws
  double tol = 1e-6;
  double dt = kDefaultFlowDt;
  std::uint64_t seed = 0;
};

struct ViableCurveResult {
  MeasureCurve curve;      // fine grid states; selection attached
  DistanceTrace trace;     // g at the dyadic nodes (before any projection)
  std::vector<double> jumps;  // projection jump per node, 0 when none
  double total_jump = 0.0;
  double max_g = 0.0;
  bool success = false;
  std::string failure;     // empty on success
};

// Dyadic construction on [tau, t_end]: on each subinterval the candidate
// constant selection whose endpoint is closest to Q(t_{k+1}) is kept; when
// that distance exceeds tol the endpoint is projected onto Q(t_{k+1}) and
// the jump is recorded. Success requires max g <= tol and total jump
// <= tol 2^levels.
ViableCurveResult build_viable_curve(const SetValuedField& field,
                                     const ConstraintTube& tube, double tau,
                                     double t_end,
                                     const DiscreteMeasure& mu_tau,
                                     const ViableCurveOptions& options = {});

struct EmpiricalInvarianceReport {
  std::size_t curves = 0;
  double max_distance = 0.0;
  std::size_t worst_curve = 0;
  double worst_time = 0.0;
  bool passed = true;
};

// Integrates N seeded random selections and measures the largest
// dist(mu(t); Q(t)) over curves and grid times.
EmpiricalInvarianceReport check_empirical_invariance(
    const SetValuedField& field, const ConstraintTube& tube,
    const DiscreteMeasure& mu_tau, const std::vector<double>& grid,
    std::size_t n, std::uint64_t seed, double tol,
    double dt = kDefaultFlowDt);

// g(t_i) = dist(mu(t_i); Q(t_i)) along a curve, with envelope
// g(t_0) exp(int (l + L)).
DistanceTrace distance_trace(const MeasureCurve& curve,
                             const ConstraintTube& tube,
                             const StepFunction& l, const StepFunction& cap_l);

// g(t) = W_p(mu(t), nu(t)) from a Filippov tracking trace.
DistanceTrace distance_trace(const FilippovResult& tracked);

struct GronwallReport {
  std::size_t pairs = 0;
  double max_ratio = 0.0;  // max g(t) / (g(s) exp(int_s^t (l+L))) over pairs
  double worst_s = 0.0;
  double worst_t = 0.0;
  bool passed = true;
};

// Checks g(t) <= g(s) exp(int_s^t (l + L)) (1 + rel_slack) + abs_slack for
// every pair of trace times s <= t.
GronwallReport gronwall_monitor(const DistanceTrace& trace,
                                const StepFunction& l,
                                const StepFunction& cap_l,
                                double rel_slack = 0.05,
                                double abs_slack = 1e-9);

struct NecessaryHit {
  double t = 0.0;
  int witness = -1;      // generator passing the graph probe, or -1
  bool projected = false;  // the state was projected onto Q(t) first
  ConeReport best;       // report of the witness, or of the best candidate
};

// Along a curve, at up to `max_times` of its grid times, probes whether
// some generator v gives (1, v) in the graph cone of the tube.
std::vector<NecessaryHit> necessary_condition_probe(
    const SetValuedField& field, const ConstraintTube& tube,
    const MeasureCurve& curve, std::size_t max_times = 16,
    const CheckOptions& options = {});

// Rate check behind the existence of admissible curves with prescribed
// initial velocity. For v_tau = sum_k w_k v^k(tau, mu_tau) and each h, a
// Filippov track over [tau, tau + h] (8 steps) of the frozen-velocity curve
// s -> (Id + (s - tau) v_tau)#mu_tau gives mu(tau + h); reported is
// W_p(mu(tau + h), (Id + h v_tau)#mu_tau) / h.
struct VelocityDiagnostic {
  std::vector<std::pair<double, double>> quotients;  // (h, quotient)
  double max_quotient = 0.0;
  double min_quotient = 0.0;
  std::vector<double> weights;
  bool passed = false;  // max_quotient <= eps
};

VelocityDiagnostic initial_velocity_diagnostic(
    const SetValuedField& field, double tau, const DiscreteMeasure& mu_tau,
    const std::vector<double>& weights, const std::vector<double>& h_grid,
    double eps, double radius = 10.0, double dt = 1e-3);

// Converse check: for the solution driven by `sel` from (tau, mu_tau), a
// convex-weight search (simplex grid of resolution 5, then local pattern
// refinement) for v in V(tau, mu_tau) minimizing
// min_h W_p(mu(tau + h), (Id + h v)#mu_tau) / h. passed iff that is <= eps.
VelocityDiagnostic reachable_velocity_diagnostic(
    const SetValuedField& field, const Selection& sel, double tau,
    const DiscreteMeasure& mu_tau, const std::vector<double>& h_grid,
    double eps, double dt = 1e-3);

}  // namespace contincl

#endif  // CONTINCL_VIABILITY_HPP_

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

#include "contincl/viability.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "contincl/errors.hpp"
#include "contincl/families.hpp"
#include "test_util.hpp"

namespace contincl {
namespace {

using testing::line;

GeneratorSpec radial(double a) { return linear_family({a, 0.0, 0.0, a}, {0.0, 0.0}); }

const ConstraintTube& disc_tube() {
  static const ConstraintTube t = ConstraintTube::constant(
      std::make_shared<SupportConstraint>(Region::ball({0.0, 0.0}, 1.0), 2.0), 1.0);
  return t;
}

std::vector<StateSample> disc_samples(std::uint64_t seed = 1) {
  return sample_states(disc_tube(), chebyshev_times(0.0, 1.0, 32), 1, seed);
}

const DiscreteMeasure kStart({{0.5, 0.0}, {-0.3, 0.6}, {0.0, -1.0}},
                             {0.5, 0.25, 0.25});

TEST(ChebyshevTimes, CoverTheInterval) {
  const std::vector<double> t = chebyshev_times(0.0, 2.0, 32);
  ASSERT_EQ(t.size(), 32u);
  EXPECT_DOUBLE_EQ(t.front(), 0.0);
  EXPECT_DOUBLE_EQ(t.back(), 2.0);
  for (std::size_t i = 1; i < t.size(); ++i) EXPECT_GT(t[i], t[i - 1]);
}

TEST(SampleStates, InsideAndOnTheBoundary) {
  const std::vector<StateSample> s = disc_samples();
  ASSERT_EQ(s.size(), 32u);
  bool boundary = false;
  for (const StateSample& x : s) {
    EXPECT_TRUE(disc_tube().at(x.t)->contains(x.mu));
    for (const Point& p : x.mu.points()) boundary |= std::abs(norm(p) - 1.0) < 1e-12;
  }
  EXPECT_TRUE(boundary);
}

TEST(ViabilityCondition, Examples) {
  const std::vector<StateSample> s = disc_samples();
  EXPECT_EQ(check_viability_condition(make_field(2, {constant_family({0.0, 0.0})}, true),
                                      disc_tube(), s)
                .verdict,
            CheckVerdict::kSatisfied);
  EXPECT_EQ(check_viability_condition(make_field(2, {radial(-1.0)}, true), disc_tube(), s)
                .verdict,
            CheckVerdict::kSatisfied);
  EXPECT_EQ(check_viability_condition(make_field(2, {radial(1.0)}, true), disc_tube(), s)
                .verdict,
            CheckVerdict::kViolated);
}

TEST(InvarianceCondition, Examples) {
  const std::vector<StateSample> s = disc_samples();
  EXPECT_EQ(check_invariance_condition(make_field(2, {radial(-1.0)}, true), disc_tube(), s)
                .verdict,
            CheckVerdict::kSatisfied);
  EXPECT_EQ(check_invariance_condition(make_field(2, {radial(-1.0), radial(1.0)}, true),
                                       disc_tube(), s)
                .verdict,
            CheckVerdict::kViolated);
  EXPECT_EQ(check_invariance_condition(make_field(2, {constant_family({0.0, 0.0})}, true),
                                       disc_tube(), s)
                .verdict,
            CheckVerdict::kSatisfied);
}

TEST(ViabilityCondition, EpigraphFailuresAreInconclusive) {
  const ConstraintTube epi = ConstraintTube::constant(
      std::make_shared<EpigraphConstraint>(second_moment_functional(), 1), 1.0);
  // Pushes mass outward at fixed height: leaves the epigraph on its boundary.
  const SetValuedField out =
      make_field(2, {linear_family({1.0, 0.0, 0.0, 0.0}, {0.0, 0.0})}, true);
  const ViabilityReport r = check_viability_condition(
      out, epi, sample_states(epi, chebyshev_times(0.0, 1.0, 8), 1, 3));
  EXPECT_NE(r.verdict, CheckVerdict::kSatisfied);
  EXPECT_NE(r.verdict, CheckVerdict::kViolated);
}

TEST(BuildViableCurve, Examples) {
  const ViableCurveResult in =
      build_viable_curve(make_field(2, {radial(-1.0)}, true), disc_tube(), 0.0, 1.0, kStart);
  EXPECT_TRUE(in.success);
  for (double g : in.trace.g_values) EXPECT_LE(g, 1e-6);
  EXPECT_EQ(in.total_jump, 0.0);

  const ViableCurveResult still = build_viable_curve(
      make_field(2, {constant_family({0.0, 0.0})}, true), disc_tube(), 0.0, 1.0, kStart);
  EXPECT_TRUE(still.success);
  for (const auto& s : still.curve.states) EXPECT_EQ(s, kStart);

  const ConstraintTube grow = ConstraintTube::linear_ball({0.0, 0.0}, 1.0, 1.0, 1.0, 2.0);
  const DiscreteMeasure edge = DiscreteMeasure::dirac({1.0, 0.0});
  const ViableCurveResult g = build_viable_curve(
      make_field(2, {constant_family({0.0, 0.0})}, true), grow, 0.0, 1.0, edge);
  EXPECT_TRUE(g.success);
  for (double x : g.trace.g_values) EXPECT_EQ(x, 0.0);

  const ViableCurveResult out = build_viable_curve(
      make_field(2, {radial(1.0)}, true), disc_tube(), 0.0, 1.0, kStart);
  EXPECT_FALSE(out.success);
  EXPECT_GT(out.total_jump, 0.0);
  EXPECT_FALSE(out.failure.empty());
}

TEST(BuildViableCurve, RejectsInfeasibleStart) {
  EXPECT_THROW(build_viable_curve(make_field(2, {radial(-1.0)}, true), disc_tube(), 0.0,
                                  1.0, DiscreteMeasure::dirac({2.0, 0.0})),
               ConstraintViolation);
}

TEST(EmpiricalInvariance, Examples) {
  const std::vector<double> grid = uniform_grid(0.0, 1.0, 32);
  const DiscreteMeasure interior({{0.5, 0.0}, {-0.3, 0.4}}, {0.5, 0.5});
  EXPECT_TRUE(check_empirical_invariance(make_field(2, {radial(-1.0)}, true), disc_tube(),
                                         interior, grid, 50, 1, 1e-6)
                  .passed);
  EXPECT_TRUE(check_empirical_invariance(make_field(2, {constant_family({0.0, 0.0})}, true),
                                         disc_tube(), interior, grid, 5, 1, 1e-6)
                  .passed);
  const EmpiricalInvarianceReport r = check_empirical_invariance(
      make_field(2, {radial(2.0), radial(-1.0)}, true), disc_tube(), kStart, grid, 50, 1,
      1e-6);
  EXPECT_FALSE(r.passed);
  EXPECT_GT(r.max_distance, 1e-3);
}

TEST(Coupling, ConditionSatisfiedImpliesCurveAndInvariance) {
  const std::vector<GeneratorSpec> inward = {radial(-1.0), interaction_family(1.0),
                                             attraction_to_ball_family({0.2, 0.0}, 0.3, 2.0)};
  const SetValuedField field = make_field(2, inward, true);
  const std::vector<StateSample> s = disc_samples(9);
  ASSERT_EQ(check_viability_condition(field, disc_tube(), s).verdict,
            CheckVerdict::kSatisfied);
  ASSERT_EQ(check_invariance_condition(field, disc_tube(), s).verdict,
            CheckVerdict::kSatisfied);
  EXPECT_TRUE(build_viable_curve(field, disc_tube(), 0.0, 1.0, kStart).success);
  EXPECT_TRUE(check_empirical_invariance(field, disc_tube(), kStart,
                                         uniform_grid(0.0, 1.0, 32), 50, 4, 1e-6)
                  .passed);
}

TEST(Coupling, EmpiricalFailureRulesOutSatisfied) {
  for (double a : {0.5, 1.0, 2.0}) {
    const SetValuedField field = make_field(2, {radial(-1.0), radial(a)}, true);
    const EmpiricalInvarianceReport e = check_empirical_invariance(
        field, disc_tube(), kStart, uniform_grid(0.0, 1.0, 32), 20, 2, 1e-6);
    if (!e.passed) {
      EXPECT_NE(check_invariance_condition(field, disc_tube(), disc_samples()).verdict,
                CheckVerdict::kSatisfied);
    }
  }
}

TEST(GronwallMonitor, Examples) {
  DistanceTrace zero{{0.0, 0.5, 1.0}, {0.0, 0.0, 0.0}, {}};
  EXPECT_TRUE(gronwall_monitor(zero, StepFunction(0.0), StepFunction(0.0)).passed);
  DistanceTrace flat{{0.0, 0.5, 1.0}, {0.3, 0.3, 0.3}, {}};
  EXPECT_TRUE(gronwall_monitor(flat, StepFunction(0.0), StepFunction(0.0)).passed);
  DistanceTrace grow{{0.0, 1.0}, {0.1, 0.5}, {}};
  EXPECT_FALSE(gronwall_monitor(grow, StepFunction(0.5), StepFunction(0.5)).passed);
}

TEST(GronwallMonitor, FilippovTraceOfLinearSystem) {
  const SetValuedField field = make_field(
      1, {linear_family({-1.0}, {0.0}), interaction_family(0.5)}, true);
  const std::vector<double> grid = uniform_grid(0.0, 1.0, 20);
  const DiscreteMeasure nu0 = line({0.0, 1.0}, {0.5, 0.5});
  const Selection sel = random_selection(2, true, grid, 3, 0);
  const MeasureCurve ref = solve_inclusion(field, sel, 0.0, nu0, grid);
  const FilippovResult r = filippov_track(field, ref, line({0.3, 1.4}, {0.5, 0.5}), 5.0,
                                          selection_driver(field, sel));
  EXPECT_TRUE(gronwall_monitor(distance_trace(r), field.l_bound(), field.cap_l_bound())
                  .passed);
}

TEST(DistanceTrace, LipschitzAlongViableCurve) {
  // g is 1-Lipschitz in W_p and the curve moves at most ac_envelope per step.
  const SetValuedField field = make_field(2, {radial(-1.0), interaction_family(1.0)}, true);
  const ViableCurveResult v = build_viable_curve(field, disc_tube(), 0.0, 1.0, kStart);
  const DistanceTrace g =
      distance_trace(v.curve, disc_tube(), field.l_bound(), field.cap_l_bound());
  const double b = moment_envelope(moment_p(kStart, 2.0), field.m_bound(), 0.0, 1.0);
  for (std::size_t i = 0; i + 1 < g.times.size(); ++i) {
    EXPECT_LE(std::abs(g.g_values[i + 1] - g.g_values[i]),
              1.05 * ac_envelope(b, field.m_bound(), g.times[i], g.times[i + 1]) + 1e-12);
  }
}

TEST(NecessaryCondition, Examples) {
  const SetValuedField still = make_field(2, {constant_family({0.0, 0.0})}, true);
  MeasureCurve c;
  c.times = uniform_grid(0.0, 1.0, 4);
  c.states.assign(5, kStart);
  for (const NecessaryHit& h : necessary_condition_probe(still, disc_tube(), c)) {
    EXPECT_EQ(h.witness, 0);
    EXPECT_EQ(h.best.verdict, ConeVerdict::kMember);
  }
  const SetValuedField in = make_field(2, {radial(-1.0)}, true);
  const ViableCurveResult v = build_viable_curve(in, disc_tube(), 0.0, 1.0, kStart);
  for (const NecessaryHit& h : necessary_condition_probe(in, disc_tube(), v.curve)) {
    EXPECT_EQ(h.best.verdict, ConeVerdict::kMember);
  }
  // The outward curve is forced back by projections; its states violate the
  // condition at the boundary.
  const SetValuedField out = make_field(2, {radial(1.0)}, true);
  const ViableCurveResult o = build_viable_curve(out, disc_tube(), 0.0, 1.0, kStart);
  bool flagged = false;
  for (const NecessaryHit& h : necessary_condition_probe(out, disc_tube(), o.curve)) {
    flagged |= h.witness < 0 && h.best.verdict == ConeVerdict::kNonMember;
  }
  EXPECT_TRUE(flagged);
}

TEST(VelocityDiagnostics, GeneratorsOfTheBallScenario) {
  const SetValuedField field = make_field(2, {radial(-1.0), interaction_family(1.0)}, true);
  std::vector<double> hs;
  for (double h = 1e-3; h <= 1e-2 + 1e-15; h += 1e-3) hs.push_back(h);
  for (std::vector<double> w : {std::vector<double>{1.0, 0.0}, {0.0, 1.0}}) {
    const VelocityDiagnostic d = initial_velocity_diagnostic(field, 0.0, kStart, w, hs, 1e-2);
    EXPECT_TRUE(d.passed) << d.max_quotient;
  }
  const Selection sel = random_selection(2, true, uniform_grid(0.0, 1.0, 16), 5, 1);
  const VelocityDiagnostic r =
      reachable_velocity_diagnostic(field, sel, 0.0, kStart, hs, 1e-2);
  EXPECT_TRUE(r.passed) << r.min_quotient;
}

}  // namespace
}  // namespace contincl

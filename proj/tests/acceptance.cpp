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

// End-to-end acceptance run: one PASS/FAIL line per criterion, exit status
// 0 only when every criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "contincl/calculus.hpp"
#include "contincl/cones.hpp"
#include "contincl/constraints.hpp"
#include "contincl/dynamics.hpp"
#include "contincl/families.hpp"
#include "contincl/io.hpp"
#include "contincl/rng.hpp"
#include "contincl/transport.hpp"
#include "contincl/viability.hpp"
#include "test_util.hpp"

namespace contincl {
namespace {

using Clock = std::chrono::steady_clock;
using testing::line;
using testing::random_map;
using testing::random_measure;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

GeneratorSpec radial(double a) {
  return linear_family({a, 0.0, 0.0, a}, {0.0, 0.0});
}

const DiscreteMeasure& ball_start() {
  static const DiscreteMeasure mu({{0.5, 0.0}, {-0.3, 0.6}, {0.0, -1.0}},
                                  {0.5, 0.25, 0.25});
  return mu;
}

ConstraintTube unit_disc() {
  return ConstraintTube::constant(
      std::make_shared<SupportConstraint>(Region::ball({0.0, 0.0}, 1.0), 2.0), 1.0);
}

// 1. Exact transport against permutations.
Verdict ot_exactness() {
  const auto t0 = Clock::now();
  SplitMix64 rng(101);
  const double ps[] = {1.5, 2.0, 3.0};
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng.index(6), d = 1 + rng.index(3);
    const double p = ps[rng.index(3)];
    const DiscreteMeasure mu = random_measure(rng, n, d, 2.0, true);
    const DiscreteMeasure nu = random_measure(rng, n, d, 2.0, true);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = INFINITY;
    do {
      double c = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        c += std::pow(distance(mu.point(k), nu.point(perm[k])), p);
      }
      best = std::min(best, c / static_cast<double>(n));
    } while (std::next_permutation(perm.begin(), perm.end()));
    const double lp = wasserstein(mu, nu, p, TransportSolver::kNetworkFlow).distance;
    worst = std::max(worst, std::abs(lp - std::pow(best, 1.0 / p)));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && secs < 5.0,
          "max |W_lp - W_brute| = " + fmt(worst) + ", " + fmt(secs) + " s"};
}

// 2. Superdifferentiability gap.
Verdict superdiff() {
  const auto t0 = Clock::now();
  const InequalityReport r = verify_inequalities(7, 500, 0);
  const double secs = seconds_since(t0);
  return {r.max_gap <= 1e-9 && secs < 30.0 && r.instances == 500,
          "max gap = " + fmt(r.max_gap) + " on 500 instances, " + fmt(secs) + " s"};
}

// 3. Pointwise power estimates.
Verdict pnorm() {
  const auto t0 = Clock::now();
  const InequalityReport r = verify_inequalities(7, 0, 10000);
  const double secs = seconds_since(t0);
  return {r.max_pnorm_gap <= 1e-12 && secs < 2.0 &&
              r.branch_counts.at("pnorm_p_lt_2") == 10000 &&
              r.branch_counts.at("pnorm_p_ge_2") == 10000,
          "max gap = " + fmt(r.max_pnorm_gap) + " on 2 x 10^4 pairs, " + fmt(secs) +
              " s"};
}

// 4. RK4 accuracy on v = -x.
Verdict flow_accuracy() {
  const VelocityField v(
      1, [](double, const Point& x) { return Point{-x[0]}; }, StepFunction(1.0),
      StepFunction(1.0));
  const MeasureCurve c =
      solve_continuity(v, 0.0, DiscreteMeasure::dirac({1.0}), {0.0, 1.0}, 1e-2);
  const double err = std::abs(c.back().point(0)[0] - std::exp(-1.0));
  return {err <= 1e-8, "endpoint error = " + fmt(err)};
}

// 5. Moment and absolute-continuity envelopes.
Verdict envelopes() {
  SplitMix64 rng(505);
  double worst_m = 0.0, worst_ac = 0.0;
  for (int s = 0; s < 20; ++s) {
    const std::size_t d = 1 + rng.index(2);
    std::vector<GeneratorSpec> gens;
    for (int k = 0; k < 2; ++k) {
      switch (rng.index(4)) {
        case 0: {
          std::vector<double> a(d * d);
          for (double& x : a) x = rng.uniform(-1.5, 1.5);
          Point b(d);
          for (double& x : b) x = rng.uniform(-1, 1);
          gens.push_back(linear_family(a, b));
          break;
        }
        case 1:
          gens.push_back(interaction_family(rng.uniform(0.1, 2.0)));
          break;
        case 2: {
          Point c(d);
          for (double& x : c) x = rng.uniform(-1, 1);
          gens.push_back(constant_family(c));
          break;
        }
        default:
          gens.push_back(attraction_to_ball_family(Point(d, 0.5), rng.uniform(0.1, 1.0),
                                                   rng.uniform(0.2, 2.0)));
      }
    }
    const SetValuedField field = make_field(d, gens, true);
    const DiscreteMeasure mu = random_measure(rng, 1 + rng.index(5), d);
    const std::vector<double> grid = uniform_grid(0.0, 1.0, 50);
    for (const MeasureCurve& c : sample_curves(field, mu, grid, 4, s)) {
      const std::vector<double> mom = moment_trace(c, 2.0);
      const std::vector<double> ac = ac_trace(c, 2.0);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double b = moment_envelope(mom[0], field.m_bound(), 0.0, grid[i]);
        if (b > 0.0) worst_m = std::max(worst_m, mom[i] / b);
        if (i + 1 < grid.size()) {
          const double bn = moment_envelope(mom[0], field.m_bound(), 0.0, grid[i + 1]);
          const double ab = ac_envelope(bn, field.m_bound(), grid[i], grid[i + 1]);
          if (ab > 0.0) worst_ac = std::max(worst_ac, ac[i] / ab);
        }
      }
    }
  }
  return {worst_m <= 1.05 && worst_ac <= 1.05,
          "max moment/envelope = " + fmt(worst_m) + ", max ac/envelope = " +
              fmt(worst_ac) + " over 20 scenarios"};
}

// 6. Filippov tracking.
Verdict filippov() {
  const SetValuedField field = make_field(
      1, {linear_family({-1.0}, {0.0}), linear_family({-1.0}, {1.0})}, true);
  const std::vector<double> grid = uniform_grid(0.0, 1.0, 50);
  const DiscreteMeasure mu = line({0.0, 1.0}, {0.5, 0.5});
  double sup_adm = 0.0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Selection sel = random_selection(2, true, grid, 66, s);
    const MeasureCurve ref = solve_inclusion(field, sel, 0.0, mu, grid);
    const FilippovResult r = filippov_track(field, ref, mu, 5.0, selection_driver(field, sel));
    for (const FilippovStep& st : r.trace) sup_adm = std::max(sup_adm, st.wdist);
  }
  const GeneratorSpec w = linear_family({-1.0}, {2.0});
  const DiscreteMeasure nu0 = line({0.1, 1.2}, {0.5, 0.5});
  const MeasureCurve ref = solve_continuity(w.generator(0.0, nu0), 0.0, nu0, grid);
  const FilippovResult r = filippov_track(field, ref, mu, 5.0, w.generator);
  const double gl = (field.l_bound() + field.cap_l_bound()).integral(0.0, 1.0);
  double worst = 0.0;
  const double w0 = r.trace.front().wdist;
  for (const FilippovStep& st : r.trace) {
    const double bound = std::exp(gl) * (w0 + st.eta_integral);
    worst = std::max(worst, st.wdist / bound);
  }
  return {sup_adm <= 1e-6 && worst <= 1.05,
          "admissible sup W = " + fmt(sup_adm) + ", inadmissible W/bound = " +
              fmt(worst)};
}

std::vector<double> small_h_grid() {
  std::vector<double> hs;
  for (int k = 1; k <= 10; ++k) hs.push_back(1e-3 * k);
  return hs;
}

SetValuedField ball_pair() {
  return make_field(2, {radial(-1.0), interaction_family(1.0)}, true);
}

// 7. Curves with a prescribed initial velocity.
Verdict initial_velocity() {
  const SetValuedField field = ball_pair();
  double worst = 0.0;
  bool ok = true;
  for (std::vector<double> w : {std::vector<double>{1.0, 0.0}, {0.0, 1.0}}) {
    const VelocityDiagnostic d =
        initial_velocity_diagnostic(field, 0.0, ball_start(), w, small_h_grid(), 1e-2);
    worst = std::max(worst, d.max_quotient);
    ok = ok && d.passed;
  }
  return {ok && worst <= 1e-2, "max quotient = " + fmt(worst) + " over both generators"};
}

// 8. Velocities of reachable curves.
Verdict reachable_velocity() {
  const SetValuedField field = ball_pair();
  const std::vector<double> grid = uniform_grid(0.0, 1.0, 64);
  double worst = 0.0;
  bool ok = true;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Selection sel = random_selection(2, true, grid, 88, s);
    const VelocityDiagnostic d =
        reachable_velocity_diagnostic(field, sel, 0.0, ball_start(), small_h_grid(), 1e-2);
    worst = std::max(worst, d.min_quotient);
    ok = ok && d.passed;
  }
  return {ok && worst <= 1e-2, "worst min-quotient = " + fmt(worst) + " over 10 solutions"};
}

bool has_boundary_atom(const DiscreteMeasure& mu, double r) {
  for (const Point& x : mu.points()) {
    if (std::abs(norm(x) - r) < 1e-9) return true;
  }
  return false;
}

// 9. Stationary viability.
Verdict viability() {
  const ConstraintTube disc = unit_disc();
  const std::vector<StateSample> samples =
      sample_states(disc, chebyshev_times(0.0, 1.0, 32), 1, 9);
  bool boundary = false, interior = false;
  for (const auto& s : samples) {
    (has_boundary_atom(s.mu, 1.0) ? boundary : interior) = true;
  }
  const SetValuedField in = make_field(2, {radial(-1.0)}, true);
  const ViabilityReport cond = check_viability_condition(in, disc, samples);
  const ViableCurveResult curve = build_viable_curve(in, disc, 0.0, 1.0, ball_start());
  double max_g = 0.0, jump = 0.0;
  for (double g : curve.trace.g_values) max_g = std::max(max_g, g);
  for (double j : curve.jumps) jump = std::max(jump, j);
  const SetValuedField out = make_field(2, {radial(1.0)}, true);
  const ViabilityReport bad = check_viability_condition(out, disc, samples);
  const EmpiricalInvarianceReport emp = check_empirical_invariance(
      out, disc, ball_start(), uniform_grid(0.0, 1.0, 32), 10, 9, 1e-6);
  const bool pass = samples.size() == 32 && boundary && interior &&
                    cond.verdict == CheckVerdict::kSatisfied && curve.success &&
                    max_g <= 1e-6 && jump == 0.0 &&
                    bad.verdict == CheckVerdict::kViolated && !emp.passed;
  return {pass, "inward: " + to_string(cond.verdict) + ", max g = " + fmt(max_g) +
                    ", max jump = " + fmt(jump) + "; outward: " + to_string(bad.verdict) +
                    ", empirical max dist = " + fmt(emp.max_distance)};
}

// 10. Stationary invariance.
Verdict invariance() {
  const ConstraintTube disc = unit_disc();
  const std::vector<StateSample> samples =
      sample_states(disc, chebyshev_times(0.0, 1.0, 32), 1, 10);
  const std::vector<double> grid = uniform_grid(0.0, 1.0, 32);
  std::vector<GeneratorSpec> gens = {radial(-1.0), interaction_family(1.0)};
  const SetValuedField in = make_field(2, gens, true);
  const ViabilityReport c_in = check_invariance_condition(in, disc, samples);
  const EmpiricalInvarianceReport e_in =
      check_empirical_invariance(in, disc, ball_start(), grid, 50, 10, 1e-6);
  gens.push_back(radial(2.0));
  const SetValuedField out = make_field(2, gens, true);
  const ViabilityReport c_out = check_invariance_condition(out, disc, samples);
  const EmpiricalInvarianceReport e_out =
      check_empirical_invariance(out, disc, ball_start(), grid, 50, 10, 1e-6);
  const bool pass = c_in.verdict == CheckVerdict::kSatisfied && e_in.passed &&
                    c_out.verdict != CheckVerdict::kSatisfied && !e_out.passed;
  return {pass, "inward: " + to_string(c_in.verdict) + ", empirical " +
                    fmt(e_in.max_distance) + "; with +2x: " + to_string(c_out.verdict) +
                    ", empirical " + fmt(e_out.max_distance)};
}

// 11. Moving tubes.
Verdict tubes() {
  const SetValuedField zero = make_field(2, {constant_family({0.0, 0.0})}, true);
  CheckOptions graph;
  graph.mode = ConeMode::kGraph;
  const ConstraintTube grow = ConstraintTube::linear_ball({0.0, 0.0}, 1.0, 1.0, 1.0, 2.0);
  const ViabilityReport g = check_viability_condition(
      zero, grow, sample_states(grow, chebyshev_times(0.0, 1.0, 32), 1, 11), graph);
  const ConstraintTube shrink =
      ConstraintTube::linear_ball({0.0, 0.0}, 1.0, -0.5, 1.0, 2.0);
  const std::vector<StateSample> ss =
      sample_states(shrink, chebyshev_times(0.0, 1.0, 32), 1, 11);
  const ViabilityReport s = check_viability_condition(zero, shrink, ss, graph);
  std::size_t flagged_boundary = 0, flagged_elsewhere = 0;
  for (const SampleHit& h : s.hits) {
    if (h.verdict != ConeVerdict::kNonMember) continue;
    const double r = 1.0 - 0.5 * h.t;
    (has_boundary_atom(ss[h.sample].mu, r) ? flagged_boundary : flagged_elsewhere)++;
  }
  const bool pass = g.verdict == CheckVerdict::kSatisfied &&
                    s.verdict == CheckVerdict::kViolated && flagged_boundary > 0 &&
                    flagged_elsewhere == 0;
  return {pass, "growing: " + to_string(g.verdict) + "; shrinking: " + to_string(s.verdict) +
                    " with " + std::to_string(flagged_boundary) + " boundary hits"};
}

// 12. Epigraph directions against the analytic rule.
Verdict epigraph() {
  SplitMix64 rng(1212);
  const MeasureFunctional w = second_moment_functional();
  int agree = 0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t d = 1 + rng.index(3);
    const DiscreteMeasure mu = random_measure(rng, 1 + rng.index(5), d);
    const SampledMap xi = random_map(rng, mu);
    double deriv = 0.0;
    for (std::size_t k = 0; k < mu.size(); ++k) {
      deriv += 2.0 * mu.weight(k) * dot(mu.point(k), xi.value(k));
    }
    // Offsets of at least twice the tolerance on either side.
    const double off = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(2e-3, 1.0);
    const double rho = deriv + off;
    const EpigraphConeResult r = epigraph_cone_test(w, mu, w.eval(mu), xi, rho, 1e-3);
    if (r.boundary && r.member == (deriv <= rho)) ++agree;
  }
  return {agree == 100, std::to_string(agree) + "/100 verdicts match"};
}

// 13. Byte-identical reports.
Verdict determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "contincl_acceptance";
  fs::remove_all(root);
  const std::string scen = std::string(CONTINCL_SCENARIO_DIR) + "/ball_inward.toml";
  std::vector<std::string> failed;
  for (const char* cmd : {"simulate", "reach", "filippov", "cone-test", "viability-check",
                          "invariance-check", "viable-curve"}) {
    std::string reports[2];
    for (int k = 0; k < 2; ++k) {
      const std::string dir = (root / (std::string(cmd) + std::to_string(k))).string();
      const std::string threads = k == 0 ? "1" : "4";
      const char* argv[] = {"contincl", cmd, scen.c_str(), "--out", dir.c_str(),
                            "--threads", threads.c_str(), "--seed", "13"};
      std::ostringstream out, err;
      cli::run_cli(9, argv, out, err);
      reports[k] = out.str() + "\n" + read_text_file(dir + "/report.json");
    }
    if (reports[0] != reports[1] || reports[0].size() < 10) failed.push_back(cmd);
  }
  const char* argv[] = {"contincl", "verify-inequalities", "--seed", "13",
                        "--instances", "50"};
  std::ostringstream a, b, e;
  cli::run_cli(6, argv, a, e);
  cli::run_cli(6, argv, b, e);
  if (a.str() != b.str()) failed.push_back("verify-inequalities");
  fs::remove_all(root);
  std::string detail = "8 commands compared";
  for (const auto& f : failed) detail += ", differs: " + f;
  return {failed.empty(), detail};
}

}  // namespace
}  // namespace contincl

int main() {
  using contincl::Verdict;
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"OT exactness", contincl::ot_exactness},
      {"superdifferentiability", contincl::superdiff},
      {"power estimates", contincl::pnorm},
      {"flow accuracy", contincl::flow_accuracy},
      {"a priori estimates", contincl::envelopes},
      {"Filippov estimates", contincl::filippov},
      {"approximate initial velocities", contincl::initial_velocity},
      {"reachable-set velocities", contincl::reachable_velocity},
      {"stationary viability", contincl::viability},
      {"stationary invariance", contincl::invariance},
      {"tubes", contincl::tubes},
      {"epigraph cone", contincl::epigraph},
      {"determinism", contincl::determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                v.detail.c_str());
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}

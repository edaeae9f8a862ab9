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

#include <algorithm>
#include <cmath>
#include <limits>

#include "contincl/errors.hpp"
#include "contincl/parallel.hpp"
#include "contincl/rng.hpp"

namespace contincl {

std::string to_string(CheckVerdict v) {
  switch (v) {
    case CheckVerdict::kSatisfied:
      return "satisfied";
    case CheckVerdict::kViolated:
      return "violated";
    case CheckVerdict::kInconclusive:
      break;
  }
  return "inconclusive";
}

namespace {

std::vector<std::vector<double>> vertex_weights(std::size_t k) {
  return simplex_grid(k, 1);
}

int vertex_index(const std::vector<double>& w) {
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j] == 1.0) return static_cast<int>(j);
  }
  return -1;
}

SampledMap velocity_map(const SetValuedField& field,
                        const std::vector<double>& w, double t,
                        const DiscreteMeasure& mu) {
  const VelocityField v = field.combination(w, t, mu);
  return SampledMap::from_function(mu,
                                   [&](const Point& x) { return v(t, x); });
}

ConeReport probe(const SetValuedField& field, const ConstraintTube& tube,
                 const std::vector<double>& w, const StateSample& s,
                 const CheckOptions& opt) {
  const SampledMap xi = velocity_map(field, w, s.t, s.mu);
  if (opt.mode == ConeMode::kStationary) {
    return contingent_quotient(s.mu, xi, *tube.at(s.t), opt.h_grid,
                               opt.cone_tol, opt.member_tol);
  }
  return graph_contingent_quotient(s.t, s.mu, TangentDirection{1.0, xi}, tube,
                                   opt.h_grid, {0.0, 1.0, -1.0, 2.0, -2.0},
                                   opt.cone_tol, opt.member_tol);
}

CheckVerdict merge(const std::vector<SampleHit>& hits) {
  bool all_member = true;
  for (const auto& h : hits) {
    if (h.verdict == ConeVerdict::kNonMember) return CheckVerdict::kViolated;
    if (h.verdict != ConeVerdict::kMember) all_member = false;
  }
  return all_member ? CheckVerdict::kSatisfied : CheckVerdict::kInconclusive;
}

void add_mode_notes(ViabilityReport& r, const CheckOptions& opt) {
  r.notes.push_back("sampled times stand in for almost every t");
  if (opt.mode == ConeMode::kGraph) {
    r.notes.push_back(
        "graph-cone probes are used for both absolutely continuous and left "
        "absolutely continuous tubes");
  }
}

}  // namespace

std::vector<double> chebyshev_times(double t0, double t1, std::size_t n) {
  if (n == 0 || !(t1 >= t0)) {
    throw InvalidInput("chebyshev_times: need n >= 1 and t1 >= t0");
  }
  if (n == 1) return {0.5 * (t0 + t1)};
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = std::cos(M_PI * static_cast<double>(i) /
                              static_cast<double>(n - 1));
    t[i] = 0.5 * (t0 + t1) - 0.5 * (t1 - t0) * c;
  }
  t.front() = t0;
  t.back() = t1;
  return t;
}

std::vector<StateSample> sample_states(const ConstraintTube& tube,
                                       const std::vector<double>& times,
                                       std::size_t per_time,
                                       std::uint64_t seed, double scale,
                                       std::size_t max_atoms) {
  if (max_atoms == 0) throw InvalidInput("sample_states: max_atoms must be >= 1");
  std::vector<StateSample> out;
  std::uint64_t stream = 0;
  for (double t : times) {
    const ConstraintPtr q = tube.at(t);
    const std::size_t d = q->dim();
    for (std::size_t j = 0; j < per_time; ++j) {
      SplitMix64 rng = SplitMix64::stream(seed, stream++);
      const std::size_t n = 1 + rng.index(max_atoms);
      std::vector<Point> pts(n, Point(d));
      for (Point& x : pts) {
        for (double& c : x) c = rng.uniform(-scale, scale);
      }
      // Lifted sets need one common height across atoms.
      if (dynamic_cast<const EpigraphConstraint*>(q.get()) != nullptr) {
        for (Point& x : pts) x.back() = pts.front().back();
      }
      out.push_back(
          {t, q->project(DiscreteMeasure(std::move(pts), rng.dirichlet(n)))});
    }
  }
  return out;
}

ViabilityReport check_viability_condition(
    const SetValuedField& field, const ConstraintTube& tube,
    const std::vector<StateSample>& samples, const CheckOptions& options) {
  std::vector<std::vector<double>> candidates = vertex_weights(field.size());
  if (field.convexified() && field.size() > 1 &&
      field.size() <= options.max_simplex_generators) {
    candidates = simplex_grid(field.size(), options.simplex_resolution);
  }
  ViabilityReport report;
  report.hits.resize(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    const StateSample& s = samples[i];
    SampleHit hit;
    hit.t = s.t;
    hit.sample = i;
    hit.min_quotient = std::numeric_limits<double>::infinity();
    bool all_non_member = true;
    for (const auto& w : candidates) {
      const ConeReport r = probe(field, tube, w, s, options);
      ++hit.candidates;
      hit.min_quotient = std::min(hit.min_quotient, r.min_quotient);
      if (r.verdict == ConeVerdict::kMember) {
        hit.verdict = ConeVerdict::kMember;
        hit.witness = vertex_index(w);
        hit.weights = w;
        break;
      }
      if (r.verdict != ConeVerdict::kNonMember) all_non_member = false;
    }
    if (hit.verdict != ConeVerdict::kMember) {
      hit.verdict = all_non_member && tube.at(s.t)->certifies_violations()
                        ? ConeVerdict::kNonMember
                        : ConeVerdict::kInconclusive;
    }
    report.hits[i] = std::move(hit);
  });
  report.verdict = merge(report.hits);
  add_mode_notes(report, options);
  if (field.convexified() && field.size() > options.max_simplex_generators) {
    report.notes.push_back("convex weights beyond the vertices were not searched");
  }
  return report;
}

ViabilityReport check_invariance_condition(
    const SetValuedField& field, const ConstraintTube& tube,
    const std::vector<StateSample>& samples, const CheckOptions& options) {
  const auto candidates = vertex_weights(field.size());
  ViabilityReport report;
  report.hits.resize(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    const StateSample& s = samples[i];
    SampleHit hit;
    hit.t = s.t;
    hit.sample = i;
    hit.min_quotient = 0.0;
    bool all_member = true;
    bool any_non_member = false;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      const ConeReport r = probe(field, tube, candidates[k], s, options);
      ++hit.candidates;
      hit.min_quotient = std::max(hit.min_quotient, r.min_quotient);
      if (r.verdict != ConeVerdict::kMember) {
        all_member = false;
        if (hit.witness < 0) hit.witness = static_cast<int>(k);
      }
      if (r.verdict == ConeVerdict::kNonMember) any_non_member = true;
    }
    if (all_member) {
      hit.verdict = ConeVerdict::kMember;
    } else if (any_non_member && tube.at(s.t)->certifies_violations()) {
      hit.verdict = ConeVerdict::kNonMember;
    } else {
      hit.verdict = ConeVerdict::kInconclusive;
    }
    report.hits[i] = std::move(hit);
  });
  report.verdict = merge(report.hits);
  add_mode_notes(report, options);
  report.notes.push_back(
      "invariance hits record the first failing generator as witness");
  return report;
}

ViableCurveResult build_viable_curve(const SetValuedField& field,
                                     const ConstraintTube& tube, double tau,
                                     double t_end,
                                     const DiscreteMeasure& mu_tau,
                                     const ViableCurveOptions& options) {
  if (!(t_end > tau)) throw InvalidInput("build_viable_curve: need t_end > tau");
  if (options.levels > 20) throw InvalidInput("build_viable_curve: too many levels");
  const double g0 = tube.at(tau)->distance(mu_tau);
  if (g0 > options.tol) {
    throw ConstraintViolation("build_viable_curve: initial state is not in Q(tau)");
  }
  const std::size_t intervals = std::size_t{1} << options.levels;
  const std::vector<double> nodes = uniform_grid(tau, t_end, intervals);
  const double p = field.p();

  ViableCurveResult out;
  out.curve.times.push_back(tau);
  out.curve.states.push_back(mu_tau);
  Selection sel;
  sel.time_grid.push_back(tau);
  out.trace.times = nodes;
  out.trace.g_values.push_back(g0);
  out.jumps.push_back(0.0);
  const StepFunction rate = field.l_bound() + field.cap_l_bound();
  DiscreteMeasure cur = mu_tau;
  for (std::size_t k = 0; k < intervals; ++k) {
    const double a = nodes[k];
    const double b = nodes[k + 1];
    const auto steps = static_cast<std::size_t>(
        std::max(1.0, std::ceil((b - a) / options.dt * (1.0 - 1e-12))));
    const std::vector<double> fine = uniform_grid(a, b, steps);
    std::vector<std::vector<double>> cands = vertex_weights(field.size());
    if (field.convexified() && field.size() > 1) {
      SplitMix64 rng = SplitMix64::stream(options.seed, k);
      while (cands.size() < options.candidates) {
        std::vector<double> w = rng.dirichlet(field.size());
        double s = 0.0;
        for (double x : w) s += x;
        *std::max_element(w.begin(), w.end()) += 1.0 - s;
        cands.push_back(std::move(w));
      }
    }
    const ConstraintPtr qb = tube.at(b);
    std::optional<MeasureCurve> best;
    std::vector<double> best_w;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& w : cands) {
      MeasureCurve c =
          solve_inclusion(field, constant_selection(fine, w), a, cur, fine,
                          options.dt);
      const double d = qb->distance(c.back());
      if (d < best_d) {
        best_d = d;
        best = std::move(c);
        best_w = w;
      }
    }
    out.trace.g_values.push_back(best_d);
    double jump = 0.0;
    DiscreteMeasure end = best->back();
    if (best_d > options.tol) {
      DiscreteMeasure projected = qb->project(end);
      jump = wasserstein_distance(end, projected, p);
      end = std::move(projected);
    }
    out.jumps.push_back(jump);
    out.total_jump += jump;
    for (std::size_t i = 1; i < fine.size(); ++i) {
      out.curve.times.push_back(fine[i]);
      out.curve.states.push_back(i + 1 == fine.size() ? end : best->states[i]);
      sel.time_grid.push_back(fine[i]);
      sel.weights.push_back(best_w);
    }
    cur = std::move(end);
  }
  out.curve.selection = std::move(sel);
  for (double t : nodes) {
    out.trace.bound_values.push_back(g0 * std::exp(rate.integral(tau, t)));
  }
  out.max_g = *std::max_element(out.trace.g_values.begin(),
                                out.trace.g_values.end());
  const bool g_ok = out.max_g <= options.tol;
  const bool jump_ok =
      out.total_jump <= options.tol * static_cast<double>(intervals);
  out.success = g_ok && jump_ok;
  if (!g_ok) {
    out.failure = "distance to the constraint reached " +
                  std::to_string(out.max_g) + " > tol";
  } else if (!jump_ok) {
    out.failure = "total projection jump " + std::to_string(out.total_jump) +
                  " exceeds tol * 2^levels";
  }
  return out;
}

EmpiricalInvarianceReport check_empirical_invariance(
    const SetValuedField& field, const ConstraintTube& tube,
    const DiscreteMeasure& mu_tau, const std::vector<double>& grid,
    std::size_t n, std::uint64_t seed, double tol, double dt) {
  const std::vector<MeasureCurve> curves =
      sample_curves(field, mu_tau, grid, n, seed, dt);
  std::vector<double> worst(curves.size(), 0.0);
  std::vector<double> worst_t(curves.size(), grid.front());
  parallel_for(curves.size(), [&](std::size_t c) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double d = tube.at(grid[i])->distance(curves[c].states[i]);
      if (d > worst[c]) {
        worst[c] = d;
        worst_t[c] = grid[i];
      }
    }
  });
  EmpiricalInvarianceReport r;
  r.curves = curves.size();
  for (std::size_t c = 0; c < curves.size(); ++c) {
    if (worst[c] > r.max_distance) {
      r.max_distance = worst[c];
      r.worst_curve = c;
      r.worst_time = worst_t[c];
    }
  }
  r.passed = r.max_distance <= tol;
  return r;
}

DistanceTrace distance_trace(const MeasureCurve& curve,
                             const ConstraintTube& tube, const StepFunction& l,
                             const StepFunction& cap_l) {
  DistanceTrace tr;
  tr.times = curve.times;
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    tr.g_values.push_back(tube.at(curve.times[i])->distance(curve.states[i]));
  }
  const StepFunction rate = l + cap_l;
  for (double t : tr.times) {
    tr.bound_values.push_back(tr.g_values.front() *
                              std::exp(rate.integral(tr.times.front(), t)));
  }
  return tr;
}

DistanceTrace distance_trace(const FilippovResult& tracked) {
  DistanceTrace tr;
  for (const auto& s : tracked.trace) {
    tr.times.push_back(s.t);
    tr.g_values.push_back(s.wdist);
    tr.bound_values.push_back(s.bound);
  }
  return tr;
}

GronwallReport gronwall_monitor(const DistanceTrace& trace,
                                const StepFunction& l,
                                const StepFunction& cap_l, double rel_slack,
                                double abs_slack) {
  if (trace.times.size() != trace.g_values.size()) {
    throw InvalidInput("gronwall_monitor: trace lengths differ");
  }
  const StepFunction rate = l + cap_l;
  GronwallReport r;
  const std::size_t n = trace.times.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double env = trace.g_values[i] *
                         std::exp(rate.integral(trace.times[i], trace.times[j]));
      const double g = trace.g_values[j];
      ++r.pairs;
      double ratio = 0.0;
      if (env > 0.0) {
        ratio = g / env;
      } else if (g > abs_slack) {
        ratio = std::numeric_limits<double>::infinity();
      }
      if (ratio > r.max_ratio) {
        r.max_ratio = ratio;
        r.worst_s = trace.times[i];
        r.worst_t = trace.times[j];
      }
      if (g > env * (1.0 + rel_slack) + abs_slack) r.passed = false;
    }
  }
  return r;
}

std::vector<NecessaryHit> necessary_condition_probe(
    const SetValuedField& field, const ConstraintTube& tube,
    const MeasureCurve& curve, std::size_t max_times,
    const CheckOptions& options) {
  const std::size_t n = curve.times.size();
  if (n == 0 || max_times == 0) return {};
  std::vector<std::size_t> idx;
  const std::size_t count = std::min(n, max_times);
  for (std::size_t j = 0; j < count; ++j) {
    idx.push_back(count == 1 ? 0 : j * (n - 1) / (count - 1));
  }
  std::vector<std::optional<NecessaryHit>> hits(idx.size());
  CheckOptions graph = options;
  graph.mode = ConeMode::kGraph;
  parallel_for(idx.size(), [&](std::size_t j) {
    const double t = curve.times[idx[j]];
    NecessaryHit hit;
    hit.t = t;
    StateSample s{t, curve.states[idx[j]]};
    const ConstraintPtr q = tube.at(t);
    if (q->distance(s.mu) > options.member_tol) {
      s.mu = q->project(s.mu);
      hit.projected = true;
    }
    bool have = false;
    for (std::size_t k = 0; k < field.size(); ++k) {
      std::vector<double> w(field.size(), 0.0);
      w[k] = 1.0;
      ConeReport r = probe(field, tube, w, s, graph);
      if (r.verdict == ConeVerdict::kMember) {
        hit.witness = static_cast<int>(k);
        hit.best = std::move(r);
        have = true;
        break;
      }
      if (!have || r.min_quotient < hit.best.min_quotient) {
        hit.best = std::move(r);
        have = true;
      }
    }
    hits[j] = std::move(hit);
  });
  std::vector<NecessaryHit> out;
  for (auto& h : hits) out.push_back(std::move(*h));
  return out;
}

VelocityDiagnostic initial_velocity_diagnostic(
    const SetValuedField& field, double tau, const DiscreteMeasure& mu_tau,
    const std::vector<double>& weights, const std::vector<double>& h_grid,
    double eps, double radius, double dt) {
  if (h_grid.empty()) throw InvalidInput("velocity diagnostic: empty h-grid");
  const VelocityField v_tau = field.combination(weights, tau, mu_tau);
  const SampledMap v_map = SampledMap::from_function(
      mu_tau, [&](const Point& x) { return v_tau(tau, x); });
  // The frozen field s, x -> v_tau(tau, x) and its curve from mu_tau.
  const VelocityField frozen = VelocityField::unchecked(
      field.dim(), [v_tau, tau](double, const Point& x) { return v_tau(tau, x); },
      field.m_bound(), field.l_bound());
  const Generator driver = [frozen](double, const DiscreteMeasure&) {
    return frozen;
  };
  VelocityDiagnostic diag;
  diag.weights = weights;
  diag.min_quotient = std::numeric_limits<double>::infinity();
  for (double h : h_grid) {
    if (!(h > 0.0)) throw InvalidInput("velocity diagnostic: h must be > 0");
    const std::vector<double> grid = uniform_grid(tau, tau + h, 8);
    const double step = std::min(dt, h / 8.0);
    const MeasureCurve ref = solve_continuity(frozen, tau, mu_tau, grid, step);
    const FilippovResult tracked =
        filippov_track(field, ref, mu_tau, radius, driver, step);
    const double q = wasserstein_distance(tracked.curve.back(),
                                          displace(mu_tau, v_map, h),
                                          field.p()) /
                     h;
    diag.quotients.emplace_back(h, q);
    diag.max_quotient = std::max(diag.max_quotient, q);
    diag.min_quotient = std::min(diag.min_quotient, q);
  }
  diag.passed = diag.max_quotient <= eps;
  return diag;
}

VelocityDiagnostic reachable_velocity_diagnostic(
    const SetValuedField& field, const Selection& sel, double tau,
    const DiscreteMeasure& mu_tau, const std::vector<double>& h_grid,
    double eps, double dt) {
  if (h_grid.empty()) throw InvalidInput("velocity diagnostic: empty h-grid");
  const double p = field.p();
  const std::size_t k = field.size();
  std::vector<DiscreteMeasure> reached;
  for (double h : h_grid) {
    if (!(h > 0.0)) throw InvalidInput("velocity diagnostic: h must be > 0");
    const std::vector<double> grid = uniform_grid(tau, tau + h, 8);
    reached.push_back(solve_inclusion(field, sel, tau, mu_tau, grid,
                                      std::min(dt, h / 8.0))
                          .back());
  }
  std::vector<SampledMap> gens;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double> w(k, 0.0);
    w[j] = 1.0;
    gens.push_back(velocity_map(field, w, tau, mu_tau));
  }
  auto quotients = [&](const std::vector<double>& w) {
    std::vector<Point> vals(mu_tau.size(), Point(field.dim(), 0.0));
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t i = 0; i < mu_tau.size(); ++i) {
        for (std::size_t c = 0; c < field.dim(); ++c) {
          vals[i][c] += w[j] * gens[j].value(i)[c];
        }
      }
    }
    const SampledMap v(mu_tau, std::move(vals));
    std::vector<std::pair<double, double>> q;
    for (std::size_t i = 0; i < h_grid.size(); ++i) {
      const double h = h_grid[i];
      q.emplace_back(
          h, wasserstein_distance(reached[i], displace(mu_tau, v, h), p) / h);
    }
    return q;
  };
  auto objective = [&](const std::vector<double>& w) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [h, q] : quotients(w)) best = std::min(best, q);
    return best;
  };

  std::vector<double> best_w;
  double best = std::numeric_limits<double>::infinity();
  const std::size_t res = field.convexified() ? 5 : 1;
  for (const auto& w : simplex_grid(k, res)) {
    const double f = objective(w);
    if (f < best) {
      best = f;
      best_w = w;
    }
  }
  if (field.convexified() && k > 1) {
    // Pattern search: move mass between pairs of generators, halving the
    // step when no move improves.
    for (double step = 0.1; step > 1e-7; step *= 0.5) {
      bool improved = true;
      for (int rounds = 0; improved && rounds < 100; ++rounds) {
        improved = false;
        for (std::size_t a = 0; a < k; ++a) {
          for (std::size_t b = 0; b < k; ++b) {
            if (a == b || best_w[a] <= 0.0) continue;
            std::vector<double> w = best_w;
            const double move = std::min(step, w[a]);
            w[a] -= move;
            w[b] += move;
            const double f = objective(w);
            if (f < best) {
              best = f;
              best_w = std::move(w);
              improved = true;
            }
          }
        }
      }
    }
  }
  VelocityDiagnostic diag;
  diag.weights = best_w;
  diag.quotients = quotients(best_w);
  diag.min_quotient = best;
  for (const auto& [h, q] : diag.quotients) {
    diag.max_quotient = std::max(diag.max_quotient, q);
  }
  diag.passed = diag.min_quotient <= eps;
  return diag;
}

}  // namespace contincl

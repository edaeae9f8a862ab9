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

#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "contincl/calculus.hpp"
#include "contincl/cones.hpp"
#include "contincl/constraints.hpp"
#include "contincl/dynamics.hpp"
#include "contincl/errors.hpp"
#include "contincl/io.hpp"
#include "contincl/parallel.hpp"
#include "contincl/transport.hpp"
#include "contincl/viability.hpp"
#include "scenario.hpp"

namespace contincl::cli {
namespace {

using nlohmann::json;

struct Flags {
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 0;
  std::optional<double> tol;
  std::string format;  // empty: the command's default
};

// What a command hands back: the report, CSV artifacts by file name, and
// the file whose content replaces the report on stdout with --format csv.
struct Outcome {
  json report;
  std::vector<std::pair<std::string, std::string>> files;
  std::string primary_csv;
  std::string plain;  // default stdout when no --format is given
  int code = kExitPass;
};

// JSON has no inf/nan, so those become strings.
json num(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

json nums(const std::vector<double>& xs) {
  json a = json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

json quotient_table(const std::vector<std::pair<double, double>>& q) {
  json a = json::array();
  for (const auto& [h, v] : q) a.push_back({num(h), num(v)});
  return a;
}

json cone_json(const ConeReport& r) {
  return {{"verdict", to_string(r.verdict)},
          {"tol", num(r.tol)},
          {"min_quotient", num(r.min_quotient)},
          {"quotients", quotient_table(r.quotients)}};
}

std::string quotient_csv(const std::vector<std::pair<double, double>>& q) {
  std::string s = "h,quotient\n";
  for (const auto& [h, v] : q) s += format_double(h) + "," + format_double(v) + "\n";
  return s;
}

std::uint64_t seed_of(const Flags& f, const Scenario& sc) {
  return f.seed.value_or(sc.seed);
}

double tol_of(const Flags& f, const Scenario& sc) {
  return f.tol.value_or(sc.tol);
}

json header(const std::string& command, const Scenario& sc, std::uint64_t seed) {
  return {{"command", command}, {"scenario", sc.name}, {"seed", seed},
          {"p", num(sc.p)}, {"dimension", sc.dimension}};
}

const DiscreteMeasure& require_initial(const Scenario& sc) {
  if (!sc.initial) throw ConfigError("scenario has no [initial] measure");
  return *sc.initial;
}

const ConstraintTube& require_tube(const Scenario& sc) {
  if (!sc.has_constraint) throw ConfigError("scenario has no [constraint]");
  return *sc.constraint.tube;
}

std::vector<double> default_weights(const Scenario& sc) {
  const std::size_t k = sc.generators.size();
  if (k == 0) throw ConfigError("scenario has no generators");
  if (!sc.convexified) {
    std::vector<double> w(k, 0.0);
    w[0] = 1.0;
    return w;
  }
  return std::vector<double>(k, 1.0 / static_cast<double>(k));
}

// ---------------------------------------------------------------- wp

Outcome cmd_wp(const std::string& a, const std::string& b, double p) {
  DiscreteMeasure mu = read_measure_file(a);
  DiscreteMeasure nu = read_measure_file(b);
  for (const DiscreteMeasure* m : {&mu, &nu}) {
    if (!(measure_from_json(measure_to_json(*m)) == *m)) {
      throw NumericalFailure("input measure does not round-trip");
    }
  }
  if (mu.dim() != nu.dim()) throw InvalidInput("measures differ in dimension");
  WassersteinResult r = wasserstein(mu, nu, p);
  Outcome o;
  o.report = {{"command", "wp"}, {"p", num(p)}, {"distance", num(r.distance)},
              {"plan", plan_to_json(r.plan)},
              {"marginal_error", num(r.plan.marginal_error())}};
  std::string csv = "source_idx,target_idx,mass\n";
  for (const auto& e : r.plan.entries()) {
    csv += std::to_string(e.source_idx) + "," + std::to_string(e.target_idx) +
           "," + format_double(e.mass) + "\n";
  }
  o.files.push_back({"plan.csv", csv});
  o.primary_csv = "plan.csv";
  o.plain = format_double(r.distance) + "\n";
  return o;
}

// ------------------------------------------------ verify-inequalities

Outcome cmd_verify(const Flags& f, std::size_t instances) {
  const std::uint64_t seed = f.seed.value_or(0);
  const InequalityReport r = verify_inequalities(seed, instances);
  const double gap_tol = f.tol.value_or(1e-9);
  const double pnorm_tol = 1e-12;
  Outcome o;
  json branches = json::object();
  for (const auto& [k, v] : r.branch_counts) branches[k] = v;
  const bool passed = r.max_gap <= gap_tol && r.max_pnorm_gap <= pnorm_tol;
  o.report = {{"command", "verify-inequalities"}, {"seed", seed},
              {"instances", r.instances}, {"max_gap", num(r.max_gap)},
              {"max_pnorm_gap", num(r.max_pnorm_gap)},
              {"gap_tol", num(gap_tol)}, {"pnorm_tol", num(pnorm_tol)},
              {"branch_counts", branches}, {"passed", passed}};
  std::string csv = "quantity,value\n";
  csv += "max_gap," + format_double(r.max_gap) + "\n";
  csv += "max_pnorm_gap," + format_double(r.max_pnorm_gap) + "\n";
  o.files.push_back({"inequalities.csv", csv});
  o.primary_csv = "inequalities.csv";
  o.code = passed ? kExitPass : kExitFail;
  return o;
}

// ------------------------------------------------------------ simulate

Outcome cmd_simulate(const Flags& f, const Scenario& sc) {
  const std::uint64_t seed = seed_of(f, sc);
  const DiscreteMeasure& mu = require_initial(sc);
  const SetValuedField field = sc.field();
  const std::vector<double> grid = sc.time_grid();
  const std::vector<double> w = sc.simulate.weights.value_or(default_weights(sc));
  const Selection sel = constant_selection(grid, w);
  validate_selection(sel, field.size(), field.convexified());
  const MeasureCurve curve =
      solve_inclusion(field, sel, grid.front(), mu, grid, sc.grid.dt);
  const std::vector<double> moments = moment_trace(curve, sc.p);
  const std::vector<double> ac = ac_trace(curve, sc.p);
  const double m0 = moments.front();
  constexpr double kSlack = 1.05;
  bool passed = true;
  double worst_moment = 0.0, worst_ac = 0.0;
  std::string csv = "t,moment,moment_bound,ac,ac_bound\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double b = moment_envelope(m0, field.m_bound(), grid.front(), grid[i]);
    worst_moment = std::max(worst_moment, moments[i] / std::max(b, 1e-300));
    if (moments[i] > kSlack * b + 1e-12) passed = false;
    std::string ac_s = "", acb_s = "";
    if (i + 1 < grid.size()) {
      const double bn =
          moment_envelope(m0, field.m_bound(), grid.front(), grid[i + 1]);
      const double ab = ac_envelope(bn, field.m_bound(), grid[i], grid[i + 1]);
      if (ab > 0.0) worst_ac = std::max(worst_ac, ac[i] / ab);
      if (ac[i] > kSlack * ab + 1e-12) passed = false;
      ac_s = format_double(ac[i]);
      acb_s = format_double(ab);
    }
    csv += format_double(grid[i]) + "," + format_double(moments[i]) + "," +
           format_double(b) + "," + ac_s + "," + acb_s + "\n";
  }
  Outcome o;
  o.report = header("simulate", sc, seed);
  o.report["weights"] = nums(w);
  o.report["steps"] = grid.size() - 1;
  o.report["final_state"] = measure_to_json(curve.back());
  o.report["final_moment"] = num(moments.back());
  o.report["max_moment_ratio"] = num(worst_moment);
  o.report["max_ac_ratio"] = num(worst_ac);
  o.report["envelope_slack"] = num(kSlack);
  o.report["passed"] = passed;
  o.files.push_back({"curve.csv", curve_to_csv(curve)});
  o.files.push_back({"envelopes.csv", csv});
  o.primary_csv = "curve.csv";
  o.code = passed ? kExitPass : kExitFail;
  return o;
}

// --------------------------------------------------------------- reach

Outcome cmd_reach(const Flags& f, const Scenario& sc) {
  const std::uint64_t seed = seed_of(f, sc);
  const DiscreteMeasure& mu = require_initial(sc);
  const SetValuedField field = sc.field();
  const std::vector<double> grid = sc.time_grid();
  const MeasureCloud cloud =
      reachable_cloud(field, mu, grid, sc.reach_samples, seed, sc.grid.dt);
  json members = json::array();
  std::string csv = "sample,atom,weight";
  for (std::size_t c = 0; c < sc.dimension; ++c) csv += ",x" + std::to_string(c + 1);
  csv += "\n";
  std::vector<double> moments;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const DiscreteMeasure& s = cloud[i];
    members.push_back(measure_to_json(s));
    moments.push_back(moment_p(s, sc.p));
    for (std::size_t a = 0; a < s.size(); ++a) {
      csv += std::to_string(i) + "," + std::to_string(a) + "," +
             format_double(s.weight(a));
      for (double x : s.point(a)) csv += "," + format_double(x);
      csv += "\n";
    }
  }
  // Spread of the sampled set: the largest pairwise distance.
  double diameter = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t j = i + 1; j < cloud.size(); ++j) {
      diameter = std::max(diameter, wasserstein_distance(cloud[i], cloud[j], sc.p));
    }
  }
  const double bound = moment_envelope(moment_p(mu, sc.p), field.m_bound(),
                                       grid.front(), grid.back());
  bool passed = true;
  for (double m : moments) passed = passed && m <= 1.05 * bound + 1e-12;
  Outcome o;
  o.report = header("reach", sc, seed);
  o.report["samples"] = cloud.size();
  o.report["t"] = num(grid.back());
  o.report["diameter"] = num(diameter);
  o.report["moments"] = nums(moments);
  o.report["moment_bound"] = num(bound);
  o.report["states"] = members;
  o.report["passed"] = passed;
  o.files.push_back({"reach.csv", csv});
  o.primary_csv = "reach.csv";
  o.code = passed ? kExitPass : kExitFail;
  return o;
}

// ------------------------------------------------------------ filippov

Outcome cmd_filippov(const Flags& f, const Scenario& sc) {
  const std::uint64_t seed = seed_of(f, sc);
  const DiscreteMeasure& mu = require_initial(sc);
  const DiscreteMeasure& nu0 = sc.filippov.reference_initial.value_or(mu);
  const SetValuedField field = sc.field();
  const std::vector<double> grid = sc.time_grid();
  MeasureCurve ref;
  Generator driver;
  std::string kind;
  if (sc.filippov.driver) {
    const GeneratorSpec& d = *sc.filippov.driver;
    ProbeOptions none;
    none.enabled = false;
    const SetValuedField single(sc.dimension, {d.generator}, false,
                                StepFunction(d.m), StepFunction(d.l),
                                StepFunction(d.cap_l), sc.p, none);
    ref = solve_inclusion(single, constant_selection(grid, {1.0}), grid.front(),
                          nu0, grid, sc.grid.dt);
    driver = d.generator;
    kind = "driver:" + d.name;
  } else {
    const std::vector<double> w =
        sc.filippov.weights.value_or(default_weights(sc));
    const Selection sel = constant_selection(grid, w);
    validate_selection(sel, field.size(), field.convexified());
    ref = solve_inclusion(field, sel, grid.front(), nu0, grid, sc.grid.dt);
    driver = selection_driver(field, sel);
    kind = "selection";
  }
  const FilippovResult r =
      filippov_track(field, ref, mu, sc.filippov.radius, driver, sc.grid.dt);
  double sup_w = 0.0;
  std::string csv = "t,wdist,eta,eta_integral,gronwall,bound\n";
  for (const FilippovStep& s : r.trace) {
    sup_w = std::max(sup_w, s.wdist);
    csv += format_double(s.t) + "," + format_double(s.wdist) + "," +
           format_double(s.eta) + "," + format_double(s.eta_integral) + "," +
           format_double(s.gronwall) + "," + format_double(s.bound) + "\n";
  }
  const double w0 = wasserstein_distance(mu, nu0, sc.p);
  // With matching initial data and zero mismatch the reference itself must
  // come back.
  const double eta_total = r.trace.empty() ? 0.0 : r.trace.back().eta_integral;
  const bool exact_case = w0 == 0.0 && eta_total <= tol_of(f, sc);
  const bool passed = r.within_bound && (!exact_case || sup_w <= tol_of(f, sc));
  Outcome o;
  o.report = header("filippov", sc, seed);
  o.report["reference"] = kind;
  o.report["radius"] = num(sc.filippov.radius);
  o.report["initial_distance"] = num(w0);
  o.report["sup_distance"] = num(sup_w);
  o.report["eta_integral"] = num(eta_total);
  o.report["empirical_constant"] = num(r.empirical_constant);
  o.report["gronwall_factor"] = num(r.gronwall_factor);
  o.report["within_bound"] = r.within_bound;
  o.report["passed"] = passed;
  o.files.push_back({"filippov.csv", csv});
  o.files.push_back({"curve.csv", curve_to_csv(r.curve)});
  o.files.push_back({"reference.csv", curve_to_csv(ref)});
  o.primary_csv = "filippov.csv";
  o.code = passed ? kExitPass : kExitFail;
  return o;
}

// ----------------------------------------------------------- cone-test

SampledMap direction(const Scenario& sc, const DiscreteMeasure& mu) {
  if (sc.cone.xi) {
    for (const Point& v : *sc.cone.xi) {
      if (v.size() != mu.dim()) throw ConfigError("cone.xi: dimension mismatch");
    }
    return SampledMap(mu, *sc.cone.xi);
  }
  const SetValuedField field = sc.field();
  const std::size_t k = sc.cone.generator.value_or(0);
  if (k >= field.size()) throw ConfigError("cone.generator out of range");
  const VelocityField v = field.generator(k, sc.cone.t, mu);
  const double t = sc.cone.t;
  return SampledMap::from_function(mu, [&](const Point& x) { return v(t, x); });
}

Outcome cmd_cone(const Flags& f, const Scenario& sc) {
  const std::uint64_t seed = seed_of(f, sc);
  const DiscreteMeasure& mu = require_initial(sc);
  const ConstraintTube& tube = require_tube(sc);
  const double t = sc.cone.t;
  const SampledMap xi = direction(sc, mu);
  Outcome o;
  o.report = header("cone-test", sc, seed);
  o.report["t"] = num(t);
  o.report["mode"] = sc.cone.mode;
  o.report["constraint"] = tube.describe();
  o.report["direction"] = json::array();
  for (const Point& v : xi.values()) o.report["direction"].push_back(nums(v));

  if (sc.constraint.functional && sc.cone.rho) {
    const auto [base, alpha] = split_lifted(mu);
    std::vector<Point> bx;
    for (const Point& v : xi.values()) bx.emplace_back(v.begin(), v.end() - 1);
    const SampledMap bxi(base, bx);
    const EpigraphConeResult r = epigraph_cone_test(
        *sc.constraint.functional, base, alpha, bxi, *sc.cone.rho, sc.cone_tol);
    o.report["rho"] = num(*sc.cone.rho);
    o.report["alpha"] = num(alpha);
    o.report["boundary"] = r.boundary;
    o.report["derivative"] = num(r.derivative);
    o.report["verdict"] = r.member ? "member" : "non-member";
    o.files.push_back({"epigraph.csv", "boundary,derivative,rho,member\n" +
                                           std::string(r.boundary ? "1" : "0") +
                                           "," + format_double(r.derivative) + "," +
                                           format_double(*sc.cone.rho) + "," +
                                           (r.member ? "1" : "0") + "\n"});
    o.primary_csv = "epigraph.csv";
    o.code = r.member ? kExitPass : kExitFail;
    return o;
  }

  ConeReport r;
  if (sc.cone.mode == "graph") {
    r = graph_contingent_quotient(t, mu, {sc.cone.zeta, xi}, tube,
                                  default_h_grid(), {0.0, 1.0, -1.0, 2.0, -2.0},
                                  sc.cone_tol);
    o.report["zeta"] = num(sc.cone.zeta);
  } else {
    r = contingent_quotient(mu, xi, *tube.at(t), default_h_grid(), sc.cone_tol);
  }
  o.report["cone"] = cone_json(r);
  o.report["verdict"] = to_string(r.verdict);
  if (sc.constraint.region && sc.cone.mode != "graph") {
    const AdjacentReport adj =
        adjacent_membership_support(mu, xi, *sc.constraint.region);
    o.report["adjacent"] = adj.all;
  }
  o.files.push_back({"quotients.csv", quotient_csv(r.quotients)});
  o.primary_csv = "quotients.csv";
  o.code = r.verdict == ConeVerdict::kMember ? kExitPass : kExitFail;
  return o;
}

// --------------------------------------------- viability / invariance

CheckOptions check_options(const Scenario& sc, const SamplingSpec& s) {
  CheckOptions opt;
  opt.mode = s.mode == "graph" ? ConeMode::kGraph : ConeMode::kStationary;
  opt.cone_tol = sc.cone_tol;
  return opt;
}

std::vector<StateSample> samples_for(const Scenario& sc, const SamplingSpec& s,
                                     std::uint64_t seed) {
  const ConstraintTube& tube = require_tube(sc);
  std::vector<double> times = chebyshev_times(sc.grid.t0, sc.grid.t_end, s.times);
  times.insert(times.end(), s.extra_times.begin(), s.extra_times.end());
  std::vector<StateSample> out =
      sample_states(tube, times, s.per_time, seed, s.scale);
  if (sc.initial && tube.at(sc.grid.t0)->contains(*sc.initial)) {
    out.push_back({sc.grid.t0, *sc.initial});
  }
  return out;
}

json viability_json(const ViabilityReport& r) {
  json hits = json::array();
  for (const SampleHit& h : r.hits) {
    hits.push_back({{"t", num(h.t)}, {"sample", h.sample},
                    {"verdict", to_string(h.verdict)}, {"witness", h.witness},
                    {"weights", nums(h.weights)},
                    {"min_quotient", num(h.min_quotient)},
                    {"candidates", h.candidates}});
  }
  return {{"verdict", to_string(r.verdict)}, {"samples", r.hits.size()},
          {"hits", hits}, {"notes", r.notes}};
}

std::string hits_csv(const ViabilityReport& r) {
  std::string s = "t,sample,verdict,witness,min_quotient,candidates\n";
  for (const SampleHit& h : r.hits) {
    s += format_double(h.t) + "," + std::to_string(h.sample) + "," +
         to_string(h.verdict) + "," + std::to_string(h.witness) + "," +
         format_double(h.min_quotient) + "," + std::to_string(h.candidates) + "\n";
  }
  return s;
}

int verdict_code(CheckVerdict v) {
  return v == CheckVerdict::kSatisfied ? kExitPass : kExitFail;
}

Outcome cmd_viability(const Flags& f, const Scenario& sc) {
  const std::uint64_t seed = seed_of(f, sc);
  const SetValuedField field = sc.field();
  const std::vector<StateSample> samples = samples_for(sc, sc.viability, seed);
  const ViabilityReport r = check_viability_condition(
      field, require_tube(sc), samples, check_options(sc, sc.viability));
  Outcome o;
  o.report = header("viability-check", sc, seed);
  o.report["constraint"] = require_tube(sc).describe();
  o.report["mode"] = sc.viability.mode;
  o.report["condition"] = viability_json(r);
  o.report["verdict"] = to_string(r.verdict);
  o.files.push_back({"samples.csv", hits_csv(r)});
  o.primary_csv = "samples.csv";
  o.code = verdict_code(r.verdict);
  return o;
}

Outcome cmd_invariance(const Flags& f, const Scenario& sc) {
  const std::uint64_t seed = seed_of(f, sc);
  const SetValuedField field = sc.field();
  const ConstraintTube& tube = require_tube(sc);
  const std::vector<StateSample> samples = samples_for(sc, sc.invariance, seed);
  const ViabilityReport r = check_invariance_condition(
      field, tube, samples, check_options(sc, sc.invariance));
  Outcome o;
  o.report = header("invariance-check", sc, seed);
  o.report["constraint"] = tube.describe();
  o.report["mode"] = sc.invariance.mode;
  o.report["condition"] = viability_json(r);
  CheckVerdict verdict = r.verdict;
  if (sc.initial) {
    const double tol = tol_of(f, sc);
    const EmpiricalInvarianceReport e = check_empirical_invariance(
        field, tube, *sc.initial, sc.time_grid(), sc.invariance.curves, seed,
        tol, sc.grid.dt);
    o.report["empirical"] = {{"curves", e.curves},
                             {"max_distance", num(e.max_distance)},
                             {"worst_curve", e.worst_curve},
                             {"worst_time", num(e.worst_time)},
                             {"tol", num(tol)},
                             {"passed", e.passed}};
    if (!e.passed) verdict = CheckVerdict::kViolated;
  }
  o.report["verdict"] = to_string(verdict);
  o.files.push_back({"samples.csv", hits_csv(r)});
  o.primary_csv = "samples.csv";
  o.code = verdict_code(verdict);
  return o;
}

Outcome cmd_viable_curve(const Flags& f, const Scenario& sc) {
  const std::uint64_t seed = seed_of(f, sc);
  const DiscreteMeasure& mu = require_initial(sc);
  const SetValuedField field = sc.field();
  const ConstraintTube& tube = require_tube(sc);
  ViableCurveOptions opt;
  opt.levels = sc.grid.levels;
  opt.tol = tol_of(f, sc);
  opt.dt = sc.grid.dt;
  opt.seed = seed;
  const ViableCurveResult r =
      build_viable_curve(field, tube, sc.grid.t0, sc.grid.t_end, mu, opt);
  const DistanceTrace g =
      distance_trace(r.curve, tube, field.l_bound(), field.cap_l_bound());
  const GronwallReport gr =
      gronwall_monitor(r.trace, field.l_bound(), field.cap_l_bound());
  std::string nodes = "t,g,jump\n";
  for (std::size_t i = 0; i < r.trace.times.size(); ++i) {
    nodes += format_double(r.trace.times[i]) + "," +
             format_double(r.trace.g_values[i]) + "," + format_double(r.jumps[i]) +
             "\n";
  }
  double max_g_curve = 0.0;
  for (double x : g.g_values) max_g_curve = std::max(max_g_curve, x);
  Outcome o;
  o.report = header("viable-curve", sc, seed);
  o.report["constraint"] = tube.describe();
  o.report["levels"] = sc.grid.levels;
  o.report["tol"] = num(opt.tol);
  o.report["node_g"] = nums(r.trace.g_values);
  o.report["jumps"] = nums(r.jumps);
  o.report["total_jump"] = num(r.total_jump);
  o.report["max_g"] = num(r.max_g);
  o.report["max_g_curve"] = num(max_g_curve);
  o.report["gronwall_max_ratio"] = num(gr.max_ratio);
  o.report["success"] = r.success;
  if (!r.success) o.report["failure"] = r.failure;
  o.report["final_state"] = measure_to_json(r.curve.back());
  o.files.push_back({"curve.csv", curve_to_csv(r.curve, g.g_values)});
  o.files.push_back({"nodes.csv", nodes});
  o.primary_csv = "curve.csv";
  o.code = r.success ? kExitPass : kExitFail;
  return o;
}

void emit(const Outcome& o, const Flags& f, std::ostream& out) {
  const std::string report = dump_json(o.report);
  if (!f.out_dir.empty()) {
    std::filesystem::create_directories(f.out_dir);
    const std::filesystem::path dir(f.out_dir);
    write_text_file((dir / "report.json").string(), report);
    for (const auto& [name, text] : o.files) {
      write_text_file((dir / name).string(), text);
    }
  }
  if (f.format.empty() && !o.plain.empty()) {
    out << o.plain;
  } else if (f.format == "csv") {
    for (const auto& [name, text] : o.files) {
      if (name == o.primary_csv) out << text;
    }
  } else {
    out << report;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Continuity inclusions in Wasserstein spaces: simulation, "
               "tracking and viability checks."};
  app.require_subcommand(1);
  app.fallthrough();
  Flags flags;
  app.add_option("--out", flags.out_dir, "Directory for report.json and CSV traces");
  app.add_option("--seed", flags.seed, "Seed (overrides the scenario seed)");
  app.add_option("--threads", flags.threads, "Worker threads (0: all cores)");
  app.add_option("--tol", flags.tol, "Tolerance (overrides the scenario)");
  app.add_option("--format", flags.format, "Stdout format (default json; wp prints the distance)")
      ->check(CLI::IsMember({"json", "csv"}));

  std::string path_a, path_b, scenario_path;
  double p = 2.0;
  std::size_t instances = 500;
  std::function<Outcome()> action;

  CLI::App* wp = app.add_subcommand("wp", "W_p distance between two measure files");
  wp->add_option("a", path_a, "First measure (.json or .csv)")->required();
  wp->add_option("b", path_b, "Second measure (.json or .csv)")->required();
  wp->add_option("--p", p, "Exponent p > 1");
  wp->callback([&] { action = [&] { return cmd_wp(path_a, path_b, p); }; });

  CLI::App* vi = app.add_subcommand("verify-inequalities",
                                    "Randomized check of the transport inequalities");
  vi->add_option("--instances", instances, "Random instances (default 500)");
  vi->callback([&] { action = [&] { return cmd_verify(flags, instances); }; });

  using Cmd = Outcome (*)(const Flags&, const Scenario&);
  const std::vector<std::pair<std::string, std::pair<std::string, Cmd>>> table = {
      {"simulate", {"Integrate one selection and check a priori envelopes", cmd_simulate}},
      {"reach", {"Sample the reachable set at the final time", cmd_reach}},
      {"filippov", {"Track a reference curve and check the Filippov bound", cmd_filippov}},
      {"cone-test", {"Probe a direction against the contingent cone", cmd_cone}},
      {"viability-check", {"Sampled sufficient viability condition", cmd_viability}},
      {"invariance-check", {"Sampled invariance condition and empirical check", cmd_invariance}},
      {"viable-curve", {"Build a curve that stays in the constraint", cmd_viable_curve}},
  };
  for (const auto& [name, entry] : table) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("scenario", scenario_path, "Scenario file (.toml or .json)")
        ->required();
    const Cmd fn = entry.second;
    sub->callback([&, fn] {
      action = [&, fn] { return fn(flags, load_scenario(scenario_path)); };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitError;
  }
  try {
    set_thread_count(flags.threads == 0
                         ? std::max(1u, std::thread::hardware_concurrency())
                         : flags.threads);
    const Outcome o = action();
    emit(o, flags, out);
    return o.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace contincl::cli

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

// Velocity fields, characteristic flows and continuity inclusions driven by
// finitely generated convex velocity sets.
//
// A continuity inclusion is integrated as a sequence of continuity
// equations: on each grid interval the state is frozen, the generators are
// evaluated against it, and every atom is pushed through the RK4 flow of the
// selected convex combination. Selections are piecewise constant on the
// grid.

#ifndef CONTINCL_DYNAMICS_HPP_
#define CONTINCL_DYNAMICS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "contincl/measure.hpp"
#include "contincl/step_function.hpp"
#include "contincl/transport.hpp"

namespace contincl {

inline constexpr double kDefaultFlowDt = 1e-2;

using FieldFn = std::function<Point(double t, const Point& x)>;

struct FieldCheckOptions {
  bool enabled = true;
  std::size_t samples = 1000;
  double box_radius = 10.0;
  // Times are drawn from [0, t_max]; 0 means max(1, last breakpoint).
  double t_max = 0.0;
  std::uint64_t seed = 0x5eed;
};

// v(t, x) with a sublinear-growth bound |v| <= m(t)(1 + |x|) and a
// Lipschitz bound l(t). Both are spot-checked at construction; a failed
// check throws HypothesisViolation.
class VelocityField {
 public:
  VelocityField(std::size_t dim, FieldFn eval, StepFunction m_bound,
                StepFunction l_bound, const FieldCheckOptions& check = {});

  // Skips the construction-time checks. Used for fields produced by
  // generators, whose bounds are checked on the set-valued field instead.
  static VelocityField unchecked(std::size_t dim, FieldFn eval,
                                 StepFunction m_bound, StepFunction l_bound);

  Point operator()(double t, const Point& x) const;
  std::size_t dim() const { return dim_; }
  const StepFunction& m_bound() const { return m_; }
  const StepFunction& l_bound() const { return l_; }

 private:
  VelocityField() = default;
  std::size_t dim_ = 0;
  FieldFn eval_;
  StepFunction m_;
  StepFunction l_;
};

// A velocity-field factory (t, mu) -> v(t, mu). The returned field is
// evaluated at later times within an integration interval with mu frozen.
using Generator =
    std::function<VelocityField(double t, const DiscreteMeasure& mu)>;

struct ProbeOptions {
  bool enabled = true;
  std::size_t probes = 200;
  double box_radius = 5.0;
  double t_max = 1.0;
  std::uint64_t seed = 0x9e37;
};

// V(t, mu) = co{v^1(t, mu), ..., v^K(t, mu)} when convexified, otherwise the
// finite set of generators. Shared metadata, spot-checked on random probe
// measures:
//   |v^k(t, mu)(x)| <= m(t) (1 + |x| + M_p(mu)),
//   Lip(v^k(t, mu)) <= l(t),
//   |v^k(t, mu)(x) - v^k(t, nu)(x)| <= L(t) W_p(mu, nu).
class SetValuedField {
 public:
  SetValuedField(std::size_t dim, std::vector<Generator> generators,
                 bool convexified, StepFunction m_bound, StepFunction l_bound,
                 StepFunction cap_l_bound, double p = 2.0,
                 const ProbeOptions& probes = {});

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return generators_.size(); }
  bool convexified() const { return convexified_; }
  double p() const { return p_; }
  const StepFunction& m_bound() const { return m_; }
  const StepFunction& l_bound() const { return l_; }
  const StepFunction& cap_l_bound() const { return cap_l_; }

  VelocityField generator(std::size_t k, double t,
                          const DiscreteMeasure& mu) const;
  // sum_k w_k v^k(t, mu). Non-vertex weights require convexified().
  VelocityField combination(const std::vector<double>& weights, double t,
                            const DiscreteMeasure& mu) const;

 private:
  std::size_t dim_;
  std::vector<Generator> generators_;
  bool convexified_;
  StepFunction m_;
  StepFunction l_;
  StepFunction cap_l_;
  double p_;
};

// Piecewise-constant selection: weights[i] applies on
// [time_grid[i], time_grid[i+1]).
struct Selection {
  std::vector<double> time_grid;
  std::vector<std::vector<double>> weights;

  // Weight vector in force at time t; t at or past the last node uses the
  // last interval.
  const std::vector<double>& at(double t) const;
};

// Throws InvalidInput unless sel is well formed for K generators.
void validate_selection(const Selection& sel, std::size_t k,
                        bool convexified);

// Selection with the same weights on every interval.
Selection constant_selection(std::vector<double> grid,
                             std::vector<double> weights);

struct MeasureCurve {
  std::vector<double> times;
  std::vector<DiscreteMeasure> states;
  std::optional<Selection> selection;

  const DiscreteMeasure& front() const { return states.front(); }
  const DiscreteMeasure& back() const { return states.back(); }
};

// Uniform grid with `steps` intervals on [t0, t1].
std::vector<double> uniform_grid(double t0, double t1, std::size_t steps);

// RK4 approximation of the characteristic flow Phi^v_{(t0, t1)}(x) with the
// substep ceil((t1 - t0) / dt) intervals.
Point flow_step(const VelocityField& v, double t0, double t1, const Point& x,
                double dt = kDefaultFlowDt);

// mu(t) = Phi^v_{(tau, t)} # mu_tau on the grid (grid[0] must equal tau).
MeasureCurve solve_continuity(const VelocityField& v, double tau,
                              const DiscreteMeasure& mu_tau,
                              const std::vector<double>& grid,
                              double dt = kDefaultFlowDt);

// The field t, x -> sum_k w_k(t) v^k(t, mu(t))(x), with mu(t) supplied by
// `state`. Slow (generators are rebuilt per evaluation); meant for
// inspection rather than integration.
VelocityField selection_field(
    const SetValuedField& field, const Selection& sel,
    std::function<DiscreteMeasure(double)> state);

// Integrates the inclusion with selection `sel` over `grid` (starting at
// tau), freezing the state on each interval. The weights used on an interval
// are those of sel at the interval midpoint.
MeasureCurve solve_inclusion(const SetValuedField& field, const Selection& sel,
                             double tau, const DiscreteMeasure& mu_tau,
                             const std::vector<double>& grid,
                             double dt = kDefaultFlowDt);

// Seeded random selection on `grid`: Dirichlet(1,...,1) weights per interval
// when convexified, a uniformly drawn vertex otherwise.
Selection random_selection(std::size_t k, bool convexified,
                           const std::vector<double>& grid,
                           std::uint64_t seed, std::uint64_t stream);

// N solution curves from random selections (stream i for curve i).
std::vector<MeasureCurve> sample_curves(const SetValuedField& field,
                                        const DiscreteMeasure& mu_tau,
                                        const std::vector<double>& grid,
                                        std::size_t n, std::uint64_t seed,
                                        double dt = kDefaultFlowDt);

// States at the end of `grid` reached by N random selections from mu_tau at
// grid.front(). A single-node grid returns {mu_tau}.
MeasureCloud reachable_cloud(const SetValuedField& field,
                             const DiscreteMeasure& mu_tau,
                             const std::vector<double>& grid, std::size_t n,
                             std::uint64_t seed, double dt = kDefaultFlowDt);

// Sample points for mismatch evaluation: supp(nu) followed by 64
// deterministic Halton points inside B(0, R).
std::vector<Point> mismatch_points(const DiscreteMeasure& nu, double radius);

struct MismatchResult {
  double value = 0.0;
  std::vector<double> weights;  // minimizing convex weights (or vertex)
};

// eta_R(t): distance from w to V(t, nu) in the sup over mismatch_points of
// the Euclidean norm. The convex minimization is solved as an LP in the
// componentwise sup norm and its minimizer is then scored in the Euclidean
// norm; the result is the best of that and all vertices. Exact in d = 1,
// an upper bound otherwise.
MismatchResult mismatch(const SetValuedField& field, const VelocityField& w,
                        double t, const DiscreteMeasure& nu, double radius);

struct FilippovStep {
  double t = 0.0;
  double wdist = 0.0;         // W_p(mu(t), nu(t))
  double eta = 0.0;           // eta_R on the interval starting at t
  double eta_integral = 0.0;  // int_tau^t eta_R
  double gronwall = 1.0;      // exp(int_tau^t (l + L))
  double bound = 0.0;         // gronwall * (W_p(mu_tau, nu_tau) + eta_integral)
};

struct FilippovResult {
  MeasureCurve curve;
  std::vector<FilippovStep> trace;
  // max_t W_p(mu(t), nu(t)) / (W_p(mu_tau, nu_tau) + int eta); 0 when the
  // denominator vanishes.
  double empirical_constant = 0.0;
  double gronwall_factor = 1.0;
  bool within_bound = true;  // W_p <= bound (1 + slack) at every node
};

// Greedy Filippov tracking of `ref` (given on its own time grid) from
// mu_tau. With a driver w(t, nu) the weights on each interval minimize the
// mismatch against w(t_i, ref(t_i)); without one they minimize the endpoint
// W_p to the reference among vertices and, if convexified, a simplex grid.
FilippovResult filippov_track(const SetValuedField& field,
                              const MeasureCurve& ref,
                              const DiscreteMeasure& mu_tau, double radius,
                              const std::optional<Generator>& driver,
                              double dt = kDefaultFlowDt,
                              double slack = 0.05);

// The driver w(t, nu) = sum_k w_k(t) v^k(t, nu) of a curve produced by
// solve_inclusion with `sel`; tracking it is the zero-mismatch case.
Generator selection_driver(const SetValuedField& field, const Selection& sel);

// M_p(mu(t_i)) per node.
std::vector<double> moment_trace(const MeasureCurve& curve, double p);
// W_p(mu(t_i), mu(t_{i+1})) per interval.
std::vector<double> ac_trace(const MeasureCurve& curve, double p);

// A priori envelopes for solutions of the inclusion:
//   M_p(mu(t)) <= B := (1 + M_p(mu_tau)) exp(2 int_tau^t m) - 1,
//   W_p(mu(t1), mu(t2)) <= (1 + 2B) int_t1^t2 m.
double moment_envelope(double moment0, const StepFunction& m, double tau,
                       double t);
double ac_envelope(double moment_bound, const StepFunction& m, double t1,
                   double t2);

// Convex weights on the simplex with denominator `resolution` (all
// compositions of `resolution` into k parts), vertices first.
std::vector<std::vector<double>> simplex_grid(std::size_t k,
                                              std::size_t resolution);

}  // namespace contincl

#endif  // CONTINCL_DYNAMICS_HPP_

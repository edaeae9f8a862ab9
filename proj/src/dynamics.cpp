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

#include "contincl/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "contincl/errors.hpp"
#include "contincl/lp.hpp"
#include "contincl/parallel.hpp"
#include "contincl/rng.hpp"

namespace contincl {
namespace {

std::string describe(double t, const Point& x) {
  std::ostringstream os;
  os.precision(17);
  os << "t=" << t << " x=(";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  os << ")";
  return os.str();
}

double default_t_max(const StepFunction& a, const StepFunction& b) {
  double t = 1.0;
  if (!a.breakpoints().empty()) t = std::max(t, a.breakpoints().back());
  if (!b.breakpoints().empty()) t = std::max(t, b.breakpoints().back());
  return t;
}

Point random_box_point(SplitMix64& rng, std::size_t d, double r) {
  Point x(d);
  for (double& c : x) c = rng.uniform(-r, r);
  return x;
}

// Second point for finite-difference Lipschitz probes: a log-uniform
// offset between 1e-3 and r in a random direction.
Point nearby_point(SplitMix64& rng, const Point& x, double r) {
  Point dir(x.size());
  for (double& c : dir) c = rng.normal();
  double n = norm(dir);
  if (n == 0.0) {
    dir[0] = 1.0;
    n = 1.0;
  }
  const double len = 1e-3 * std::pow(r / 1e-3, rng.uniform());
  return axpy(x, len / n, dir);
}

bool is_vertex(const std::vector<double>& w) {
  return std::any_of(w.begin(), w.end(),
                     [](double x) { return x >= 1.0 - 1e-12; });
}

void check_point_dim(const Point& x, std::size_t d, const char* what) {
  if (x.size() != d) {
    throw InvalidInput(std::string(what) + ": point dimension mismatch");
  }
}

double radical_inverse(std::size_t i, std::size_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

// States pushed through `v` over [t0, t1].
DiscreteMeasure push_interval(const VelocityField& v, double t0, double t1,
                              const DiscreteMeasure& mu, double dt) {
  std::vector<Point> pts;
  pts.reserve(mu.size());
  for (const Point& x : mu.points()) pts.push_back(flow_step(v, t0, t1, x, dt));
  return DiscreteMeasure(std::move(pts), mu.weights());
}

void check_grid(const std::vector<double>& grid, double tau) {
  if (grid.empty()) throw InvalidInput("time grid is empty");
  if (std::abs(grid.front() - tau) > 1e-12) {
    throw InvalidInput("time grid must start at tau");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw InvalidInput("time grid must be strictly increasing");
    }
  }
}

}  // namespace

VelocityField::VelocityField(std::size_t dim, FieldFn eval,
                             StepFunction m_bound, StepFunction l_bound,
                             const FieldCheckOptions& check)
    : dim_(dim), eval_(std::move(eval)), m_(std::move(m_bound)),
      l_(std::move(l_bound)) {
  if (dim_ == 0) throw InvalidInput("VelocityField: zero dimension");
  if (!eval_) throw InvalidInput("VelocityField: empty evaluation function");
  if (!check.enabled) return;
  const double t_max = check.t_max > 0.0 ? check.t_max : default_t_max(m_, l_);
  SplitMix64 rng = SplitMix64::stream(check.seed, 0);
  for (std::size_t s = 0; s < check.samples; ++s) {
    const double t = rng.uniform(0.0, t_max);
    const Point x = random_box_point(rng, dim_, check.box_radius);
    const Point vx = (*this)(t, x);
    const double growth = m_(t) * (1.0 + norm(x));
    if (norm(vx) > growth * (1.0 + 1e-9) + 1e-12) {
      throw HypothesisViolation("VelocityField: |v(t,x)| exceeds m(t)(1+|x|) at " +
                                describe(t, x));
    }
    const Point y = nearby_point(rng, x, check.box_radius);
    const double lip = distance(vx, (*this)(t, y)) / distance(x, y);
    if (lip > l_(t) * (1.0 + 1e-6) + 1e-9) {
      throw HypothesisViolation(
          "VelocityField: Lipschitz estimate " + std::to_string(lip) +
          " exceeds l(t) at " + describe(t, x));
    }
  }
}

VelocityField VelocityField::unchecked(std::size_t dim, FieldFn eval,
                                       StepFunction m_bound,
                                       StepFunction l_bound) {
  FieldCheckOptions off;
  off.enabled = false;
  return VelocityField(dim, std::move(eval), std::move(m_bound),
                       std::move(l_bound), off);
}

Point VelocityField::operator()(double t, const Point& x) const {
  check_point_dim(x, dim_, "VelocityField");
  Point v = eval_(t, x);
  if (v.size() != dim_) {
    throw InvalidInput("VelocityField: output dimension mismatch");
  }
  if (!all_finite(v)) {
    throw NumericalFailure("VelocityField: non-finite value at " +
                           describe(t, x));
  }
  return v;
}

SetValuedField::SetValuedField(std::size_t dim,
                               std::vector<Generator> generators,
                               bool convexified, StepFunction m_bound,
                               StepFunction l_bound, StepFunction cap_l_bound,
                               double p, const ProbeOptions& probes)
    : dim_(dim), generators_(std::move(generators)), convexified_(convexified),
      m_(std::move(m_bound)), l_(std::move(l_bound)),
      cap_l_(std::move(cap_l_bound)), p_(p) {
  require_p(p_);
  if (dim_ == 0) throw InvalidInput("SetValuedField: zero dimension");
  if (generators_.empty()) throw InvalidInput("SetValuedField: no generators");
  if (!probes.enabled) return;
  SplitMix64 rng = SplitMix64::stream(probes.seed, 1);
  auto random_measure = [&]() {
    const std::size_t n = 1 + rng.index(4);
    std::vector<Point> pts(n);
    for (Point& x : pts) x = random_box_point(rng, dim_, probes.box_radius / 2);
    return DiscreteMeasure(std::move(pts), rng.dirichlet(n));
  };
  for (std::size_t s = 0; s < probes.probes; ++s) {
    const double t = rng.uniform(0.0, probes.t_max);
    const DiscreteMeasure mu = random_measure();
    const DiscreteMeasure nu = random_measure();
    const double w_mu_nu = wasserstein_distance(mu, nu, p_);
    const double moment = moment_p(mu, p_);
    const Point x = random_box_point(rng, dim_, probes.box_radius);
    const Point y = nearby_point(rng, x, probes.box_radius);
    for (std::size_t k = 0; k < generators_.size(); ++k) {
      const VelocityField v = generator(k, t, mu);
      const Point vx = v(t, x);
      if (norm(vx) > m_(t) * (1.0 + norm(x) + moment) * (1.0 + 1e-9) + 1e-12) {
        throw HypothesisViolation("SetValuedField: generator " +
                                  std::to_string(k) +
                                  " exceeds m(t)(1+|x|+M_p(mu)) at " +
                                  describe(t, x));
      }
      const double lip = distance(vx, v(t, y)) / distance(x, y);
      if (lip > l_(t) * (1.0 + 1e-6) + 1e-9) {
        throw HypothesisViolation("SetValuedField: generator " +
                                  std::to_string(k) +
                                  " Lipschitz estimate exceeds l(t) at " +
                                  describe(t, x));
      }
      const Point vnu = generator(k, t, nu)(t, x);
      if (distance(vx, vnu) > cap_l_(t) * w_mu_nu * (1.0 + 1e-6) + 1e-9) {
        throw HypothesisViolation("SetValuedField: generator " +
                                  std::to_string(k) +
                                  " is not L(t)-Lipschitz in the measure at " +
                                  describe(t, x));
      }
    }
  }
}

VelocityField SetValuedField::generator(std::size_t k, double t,
                                        const DiscreteMeasure& mu) const {
  if (k >= generators_.size()) {
    throw InvalidInput("SetValuedField: generator index out of range");
  }
  if (mu.dim() != dim_) {
    throw InvalidInput("SetValuedField: measure dimension mismatch");
  }
  VelocityField v = generators_[k](t, mu);
  if (v.dim() != dim_) {
    throw InvalidInput("SetValuedField: generator dimension mismatch");
  }
  return v;
}

VelocityField SetValuedField::combination(const std::vector<double>& weights,
                                          double t,
                                          const DiscreteMeasure& mu) const {
  if (weights.size() != generators_.size()) {
    throw InvalidInput("SetValuedField: weight/generator count mismatch");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidInput("SetValuedField: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidInput("SetValuedField: weights must sum to 1");
  }
  if (!convexified_ && !is_vertex(weights)) {
    throw InvalidInput(
        "SetValuedField: non-vertex weights on a non-convexified field");
  }
  std::vector<VelocityField> parts;
  std::vector<double> coeffs;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] == 0.0) continue;
    parts.push_back(generator(k, t, mu));
    coeffs.push_back(weights[k]);
  }
  if (parts.size() == 1 && coeffs[0] == 1.0) return parts[0];
  const std::size_t d = dim_;
  return VelocityField::unchecked(
      d,
      [parts = std::move(parts), coeffs = std::move(coeffs), d](
          double s, const Point& x) {
        Point out(d, 0.0);
        for (std::size_t k = 0; k < parts.size(); ++k) {
          const Point v = parts[k](s, x);
          for (std::size_t c = 0; c < d; ++c) out[c] += coeffs[k] * v[c];
        }
        return out;
      },
      m_, l_);
}

const std::vector<double>& Selection::at(double t) const {
  if (weights.empty()) throw InvalidInput("Selection: no intervals");
  const auto it = std::upper_bound(time_grid.begin(), time_grid.end(), t);
  std::size_t idx = it == time_grid.begin()
                        ? 0
                        : static_cast<std::size_t>(it - time_grid.begin()) - 1;
  return weights[std::min(idx, weights.size() - 1)];
}

void validate_selection(const Selection& sel, std::size_t k,
                        bool convexified) {
  if (sel.time_grid.size() < 2 ||
      sel.weights.size() + 1 != sel.time_grid.size()) {
    throw InvalidInput("Selection: need one weight vector per grid interval");
  }
  for (std::size_t i = 1; i < sel.time_grid.size(); ++i) {
    if (!(sel.time_grid[i] > sel.time_grid[i - 1])) {
      throw InvalidInput("Selection: time grid must be strictly increasing");
    }
  }
  for (const auto& w : sel.weights) {
    if (w.size() != k) {
      throw InvalidInput("Selection: weight/generator count mismatch");
    }
    double s = 0.0;
    for (double x : w) {
      if (!(x >= 0.0)) throw InvalidInput("Selection: negative weight");
      s += x;
    }
    if (std::abs(s - 1.0) > 1e-12) {
      throw InvalidInput("Selection: weights must sum to 1");
    }
    if (!convexified && !is_vertex(w)) {
      throw InvalidInput("Selection: non-vertex weights need convexified V");
    }
  }
}

Selection constant_selection(std::vector<double> grid,
                             std::vector<double> weights) {
  Selection sel;
  const std::size_t intervals = grid.size() < 2 ? 0 : grid.size() - 1;
  sel.time_grid = std::move(grid);
  sel.weights.assign(intervals, std::move(weights));
  return sel;
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t steps) {
  if (steps == 0 || !(t1 > t0)) {
    throw InvalidInput("uniform_grid: need t1 > t0 and steps >= 1");
  }
  std::vector<double> g(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    g[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(steps);
  }
  g.back() = t1;
  return g;
}

Point flow_step(const VelocityField& v, double t0, double t1, const Point& x,
                double dt) {
  if (!(t1 >= t0)) throw InvalidInput("flow_step: need t0 <= t1");
  if (!(dt > 0.0)) throw InvalidInput("flow_step: substep must be positive");
  check_point_dim(x, v.dim(), "flow_step");
  if (t1 == t0) return x;
  const double span = t1 - t0;
  const auto n = static_cast<std::size_t>(
      std::max(1.0, std::ceil(span / dt * (1.0 - 1e-12))));
  const double h = span / static_cast<double>(n);
  Point y = x;
  const std::size_t d = x.size();
  Point tmp(d);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t0 + h * static_cast<double>(i);
    const Point k1 = v(t, y);
    for (std::size_t c = 0; c < d; ++c) tmp[c] = y[c] + 0.5 * h * k1[c];
    const Point k2 = v(t + 0.5 * h, tmp);
    for (std::size_t c = 0; c < d; ++c) tmp[c] = y[c] + 0.5 * h * k2[c];
    const Point k3 = v(t + 0.5 * h, tmp);
    for (std::size_t c = 0; c < d; ++c) tmp[c] = y[c] + h * k3[c];
    const Point k4 = v(t + h, tmp);
    for (std::size_t c = 0; c < d; ++c) {
      y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    }
    if (!all_finite(y)) {
      throw NumericalFailure("flow_step: state became non-finite at " +
                             describe(t, y));
    }
  }
  return y;
}

MeasureCurve solve_continuity(const VelocityField& v, double tau,
                              const DiscreteMeasure& mu_tau,
                              const std::vector<double>& grid, double dt) {
  check_grid(grid, tau);
  if (mu_tau.dim() != v.dim()) {
    throw InvalidInput("solve_continuity: dimension mismatch");
  }
  MeasureCurve curve;
  curve.times = grid;
  curve.states.reserve(grid.size());
  curve.states.push_back(mu_tau);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    curve.states.push_back(
        push_interval(v, grid[i], grid[i + 1], curve.states.back(), dt));
  }
  return curve;
}

VelocityField selection_field(const SetValuedField& field,
                              const Selection& sel,
                              std::function<DiscreteMeasure(double)> state) {
  validate_selection(sel, field.size(), field.convexified());
  const std::size_t d = field.dim();
  return VelocityField::unchecked(
      d,
      [&field, sel, state = std::move(state)](double t, const Point& x) {
        return field.combination(sel.at(t), t, state(t))(t, x);
      },
      field.m_bound(), field.l_bound());
}

MeasureCurve solve_inclusion(const SetValuedField& field, const Selection& sel,
                             double tau, const DiscreteMeasure& mu_tau,
                             const std::vector<double>& grid, double dt) {
  validate_selection(sel, field.size(), field.convexified());
  check_grid(grid, tau);
  MeasureCurve curve;
  curve.times = grid;
  curve.selection = sel;
  curve.states.reserve(grid.size());
  curve.states.push_back(mu_tau);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double mid = 0.5 * (grid[i] + grid[i + 1]);
    const VelocityField v =
        field.combination(sel.at(mid), grid[i], curve.states.back());
    curve.states.push_back(
        push_interval(v, grid[i], grid[i + 1], curve.states.back(), dt));
  }
  return curve;
}

Selection random_selection(std::size_t k, bool convexified,
                           const std::vector<double>& grid,
                           std::uint64_t seed, std::uint64_t stream) {
  if (grid.size() < 2) throw InvalidInput("random_selection: grid too short");
  SplitMix64 rng = SplitMix64::stream(seed, stream);
  Selection sel;
  sel.time_grid = grid;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (convexified) {
      sel.weights.push_back(rng.dirichlet(k));
    } else {
      std::vector<double> w(k, 0.0);
      w[rng.index(k)] = 1.0;
      sel.weights.push_back(std::move(w));
    }
  }
  // Normalization above can leave a sum 1 +- ulp; fold it into the largest.
  for (auto& w : sel.weights) {
    double s = 0.0;
    for (double x : w) s += x;
    auto it = std::max_element(w.begin(), w.end());
    *it += 1.0 - s;
  }
  return sel;
}

std::vector<MeasureCurve> sample_curves(const SetValuedField& field,
                                        const DiscreteMeasure& mu_tau,
                                        const std::vector<double>& grid,
                                        std::size_t n, std::uint64_t seed,
                                        double dt) {
  if (n == 0) throw InvalidInput("sample_curves: need at least one curve");
  if (grid.size() < 2) throw InvalidInput("sample_curves: grid too short");
  std::vector<std::optional<MeasureCurve>> out(n);
  parallel_for(n, [&](std::size_t i) {
    const Selection sel =
        random_selection(field.size(), field.convexified(), grid, seed, i);
    out[i] = solve_inclusion(field, sel, grid.front(), mu_tau, grid, dt);
  });
  std::vector<MeasureCurve> curves;
  curves.reserve(n);
  for (auto& c : out) curves.push_back(std::move(*c));
  return curves;
}

MeasureCloud reachable_cloud(const SetValuedField& field,
                             const DiscreteMeasure& mu_tau,
                             const std::vector<double>& grid, std::size_t n,
                             std::uint64_t seed, double dt) {
  if (n == 0) throw InvalidInput("reachable_cloud: need N >= 1");
  if (grid.size() == 1) return MeasureCloud({mu_tau});
  std::vector<DiscreteMeasure> members;
  for (auto& c : sample_curves(field, mu_tau, grid, n, seed, dt)) {
    members.push_back(c.back());
  }
  return MeasureCloud(std::move(members));
}

std::vector<Point> mismatch_points(const DiscreteMeasure& nu, double radius) {
  static constexpr std::size_t kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                            23, 29, 31, 37, 41, 43, 47, 53};
  const std::size_t d = nu.dim();
  if (d > std::size(kPrimes)) {
    throw InvalidInput("mismatch_points: dimension too large");
  }
  std::vector<Point> pts = nu.points();
  std::size_t found = 0;
  for (std::size_t i = 1; found < 64 && i < 1000000; ++i) {
    Point x(d);
    for (std::size_t c = 0; c < d; ++c) {
      x[c] = 2.0 * radical_inverse(i, kPrimes[c]) - 1.0;
    }
    if (norm(x) <= 1.0) {
      pts.push_back(scale(x, radius));
      ++found;
    }
  }
  return pts;
}

MismatchResult mismatch(const SetValuedField& field, const VelocityField& w,
                        double t, const DiscreteMeasure& nu, double radius) {
  if (!(radius > 0.0)) throw InvalidInput("mismatch: radius must be > 0");
  const std::vector<Point> pts = mismatch_points(nu, radius);
  const std::size_t k = field.size();
  const std::size_t d = field.dim();
  std::vector<Point> wv;
  for (const Point& x : pts) wv.push_back(w(t, x));
  std::vector<std::vector<Point>> gv(k);
  for (std::size_t j = 0; j < k; ++j) {
    const VelocityField v = field.generator(j, t, nu);
    for (const Point& x : pts) gv[j].push_back(v(t, x));
  }
  auto score = [&](const std::vector<double>& lam) {
    double worst = 0.0;
    for (std::size_t s = 0; s < pts.size(); ++s) {
      Point diff = wv[s];
      for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t c = 0; c < d; ++c) diff[c] -= lam[j] * gv[j][s][c];
      }
      worst = std::max(worst, norm(diff));
    }
    return worst;
  };
  MismatchResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double> lam(k, 0.0);
    lam[j] = 1.0;
    const double s = score(lam);
    if (s < best.value) best = {s, lam};
  }
  if (field.convexified() && k > 1 && best.value > 0.0) {
    // Variables (lambda_1..lambda_K, u) with s = S0 - u so every
    // right-hand side stays nonnegative: maximize u subject to
    // |w_c - sum_j lambda_j v^j_c| <= S0 - u at every point and coordinate.
    double s0 = 1.0;
    for (const Point& v : wv) {
      for (double c : v) s0 = std::max(s0, std::abs(c) + 1.0);
    }
    LinearProgram lp;
    lp.objective.assign(k + 1, 0.0);
    lp.objective[k] = -1.0;
    for (std::size_t s = 0; s < pts.size(); ++s) {
      for (std::size_t c = 0; c < d; ++c) {
        std::vector<double> plus(k + 1), minus(k + 1);
        for (std::size_t j = 0; j < k; ++j) {
          plus[j] = gv[j][s][c];
          minus[j] = -gv[j][s][c];
        }
        plus[k] = 1.0;
        minus[k] = 1.0;
        lp.a_ub.push_back(std::move(plus));
        lp.b_ub.push_back(s0 + wv[s][c]);
        lp.a_ub.push_back(std::move(minus));
        lp.b_ub.push_back(s0 - wv[s][c]);
      }
    }
    std::vector<double> ones(k + 1, 1.0);
    ones[k] = 0.0;
    lp.a_eq.push_back(std::move(ones));
    lp.b_eq.push_back(1.0);
    const LpResult r = solve_lp(lp);
    if (r.status == LpStatus::kOptimal) {
      std::vector<double> lam(r.x.begin(), r.x.begin() + k);
      double total = 0.0;
      for (double x : lam) total += x;
      for (double& x : lam) x /= total;
      const double s = score(lam);
      if (s < best.value) best = {s, lam};
    }
  }
  return best;
}

std::vector<std::vector<double>> simplex_grid(std::size_t k,
                                              std::size_t resolution) {
  if (k == 0 || resolution == 0) {
    throw InvalidInput("simplex_grid: need k >= 1 and resolution >= 1");
  }
  std::vector<std::vector<double>> out;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double> v(k, 0.0);
    v[j] = 1.0;
    out.push_back(std::move(v));
  }
  std::vector<std::size_t> parts(k, 0);
  const double res = static_cast<double>(resolution);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t idx,
                                                          std::size_t left) {
    if (idx + 1 == k) {
      parts[idx] = left;
      if (std::count(parts.begin(), parts.end(), resolution) == 1) return;
      std::vector<double> w(k);
      for (std::size_t j = 0; j < k; ++j) {
        w[j] = static_cast<double>(parts[j]) / res;
      }
      out.push_back(std::move(w));
      return;
    }
    for (std::size_t a = 0; a <= left; ++a) {
      parts[idx] = a;
      rec(idx + 1, left - a);
    }
  };
  if (k > 1) rec(0, resolution);
  return out;
}

FilippovResult filippov_track(const SetValuedField& field,
                              const MeasureCurve& ref,
                              const DiscreteMeasure& mu_tau, double radius,
                              const std::optional<Generator>& driver,
                              double dt, double slack) {
  if (ref.times.size() != ref.states.size() || ref.times.size() < 2) {
    throw InvalidInput("filippov_track: reference needs >= 2 states");
  }
  const double p = field.p();
  const std::vector<double>& grid = ref.times;
  const double tau = grid.front();
  std::vector<std::vector<double>> candidates =
      field.convexified() ? simplex_grid(field.size(), 5)
                          : simplex_grid(field.size(), 1);

  FilippovResult out;
  out.curve.times = grid;
  out.curve.states.push_back(mu_tau);
  Selection sel;
  sel.time_grid = grid;
  const double w0 = wasserstein_distance(mu_tau, ref.states.front(), p);
  double eta_int = 0.0;
  double worst_ratio = 0.0;
  for (std::size_t i = 0; i + 1 <= grid.size(); ++i) {
    const DiscreteMeasure& cur = out.curve.states.back();
    FilippovStep step;
    step.t = grid[i];
    step.wdist = wasserstein_distance(cur, ref.states[i], p);
    step.eta_integral = eta_int;
    step.gronwall =
        std::exp((field.l_bound() + field.cap_l_bound()).integral(tau, grid[i]));
    step.bound = step.gronwall * (w0 + eta_int);
    if (step.wdist > step.bound * (1.0 + slack) + 1e-12) out.within_bound = false;
    if (w0 + eta_int > 0.0) {
      worst_ratio = std::max(worst_ratio, step.wdist / (w0 + eta_int));
    }
    if (i + 1 == grid.size()) {
      out.trace.push_back(step);
      break;
    }
    std::vector<double> lam;
    if (driver) {
      const VelocityField w = (*driver)(grid[i], ref.states[i]);
      const MismatchResult mm = mismatch(field, w, grid[i], ref.states[i], radius);
      lam = mm.weights;
      step.eta = mm.value;
    } else {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : candidates) {
        const DiscreteMeasure end = push_interval(
            field.combination(c, grid[i], cur), grid[i], grid[i + 1], cur, dt);
        const double dist = wasserstein_distance(end, ref.states[i + 1], p);
        if (dist < best - 1e-15) {
          best = dist;
          lam = c;
        }
      }
    }
    // Snap the weights onto the simplex exactly.
    double s = 0.0;
    for (double& x : lam) {
      x = std::max(0.0, x);
      s += x;
    }
    for (double& x : lam) x /= s;
    auto mx = std::max_element(lam.begin(), lam.end());
    double s2 = 0.0;
    for (double x : lam) s2 += x;
    *mx += 1.0 - s2;
    sel.weights.push_back(lam);
    out.curve.states.push_back(push_interval(field.combination(lam, grid[i], cur),
                                             grid[i], grid[i + 1], cur, dt));
    eta_int += step.eta * (grid[i + 1] - grid[i]);
    out.trace.push_back(step);
  }
  out.curve.selection = std::move(sel);
  out.empirical_constant = worst_ratio;
  out.gronwall_factor = out.trace.back().gronwall;
  return out;
}

Generator selection_driver(const SetValuedField& field, const Selection& sel) {
  validate_selection(sel, field.size(), field.convexified());
  return [&field, sel](double t, const DiscreteMeasure& nu) {
    return field.combination(sel.at(t), t, nu);
  };
}

std::vector<double> moment_trace(const MeasureCurve& curve, double p) {
  std::vector<double> out;
  for (const auto& s : curve.states) out.push_back(moment_p(s, p));
  return out;
}

std::vector<double> ac_trace(const MeasureCurve& curve, double p) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < curve.states.size(); ++i) {
    out.push_back(wasserstein_distance(curve.states[i], curve.states[i + 1], p));
  }
  return out;
}

double moment_envelope(double moment0, const StepFunction& m, double tau,
                       double t) {
  return (1.0 + moment0) * std::exp(2.0 * m.integral(tau, t)) - 1.0;
}

double ac_envelope(double moment_bound, const StepFunction& m, double t1,
                   double t2) {
  return (1.0 + 2.0 * moment_bound) * m.integral(t1, t2);
}

}  // namespace contincl

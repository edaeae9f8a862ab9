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

#include "contincl/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "contincl/errors.hpp"
#include "contincl/parallel.hpp"

namespace contincl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Supplies, demands and reverse-arc capacities below this are treated as
// exhausted.
constexpr double kMassEps = 1e-14;

std::vector<double> cost_matrix(const DiscreteMeasure& mu,
                                const DiscreteMeasure& nu, double p) {
  std::vector<double> c(mu.size() * nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      c[i * nu.size() + j] = std::pow(distance(mu.point(i), nu.point(j)), p);
    }
  }
  return c;
}

bool is_uniform_square(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.size() != nu.size()) return false;
  const double w = mu.weight(0);
  auto uniform = [w](const DiscreteMeasure& m) {
    return std::all_of(m.weights().begin(), m.weights().end(),
                       [w](double x) { return std::abs(x - w) <= 1e-15; });
  };
  return uniform(mu) && uniform(nu);
}

}  // namespace

TransportPlan::TransportPlan(DiscreteMeasure source, DiscreteMeasure target,
                             std::vector<double> mass, bool optimal)
    : source_(std::move(source)), target_(std::move(target)),
      mass_(std::move(mass)), optimal_(optimal) {
  if (mass_.size() != source_.size() * target_.size()) {
    throw InvalidInput("TransportPlan: matrix size mismatch");
  }
  for (double m : mass_) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw InvalidInput("TransportPlan: masses must be nonnegative");
    }
  }
  if (marginal_error() > kPlanMarginalTol) {
    throw InvalidInput("TransportPlan: marginals do not match (error " +
                       std::to_string(marginal_error()) + ")");
  }
}

double TransportPlan::cost(double p) const {
  double c = 0.0;
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j < cols(); ++j) {
      const double m = mass(i, j);
      if (m > 0.0) {
        c += m * std::pow(distance(source_.point(i), target_.point(j)), p);
      }
    }
  }
  return c;
}

double TransportPlan::marginal_error() const {
  double err = 0.0;
  for (std::size_t i = 0; i < rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols(); ++j) s += mass(i, j);
    err = std::max(err, std::abs(s - source_.weight(i)));
  }
  for (std::size_t j = 0; j < cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < rows(); ++i) s += mass(i, j);
    err = std::max(err, std::abs(s - target_.weight(j)));
  }
  return err;
}

std::vector<TransportPlan::Entry> TransportPlan::entries() const {
  std::vector<Entry> out;
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j < cols(); ++j) {
      if (mass(i, j) > 0.0) out.push_back({i, j, mass(i, j)});
    }
  }
  return out;
}

std::vector<double> min_cost_transport(const std::vector<double>& supply,
                                       const std::vector<double>& demand,
                                       const std::vector<double>& cost) {
  const std::size_t n = supply.size();
  const std::size_t m = demand.size();
  if (cost.size() != n * m) {
    throw InvalidInput("min_cost_transport: cost matrix size mismatch");
  }
  std::vector<double> flow(n * m, 0.0);
  std::vector<double> supply_left = supply;
  std::vector<double> demand_left = demand;

  // Node potentials: sources 0..n-1, sinks n..n+m-1. Reduced cost of arc
  // a->b is c(a,b) + pi(a) - pi(b) and stays nonnegative on residual arcs.
  std::vector<double> pi(n + m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double best = kInf;
    for (std::size_t i = 0; i < n; ++i) best = std::min(best, cost[i * m + j]);
    pi[n + j] = best;
  }

  std::vector<double> dist(n + m);
  std::vector<std::size_t> pred(n + m);
  std::vector<char> done(n + m);
  const std::size_t max_augment = 4 * (n + m) * (n + m) + 64;

  for (std::size_t iter = 0;; ++iter) {
    if (iter > max_augment) {
      throw NumericalFailure("min_cost_transport: augmentation limit reached");
    }
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(done.begin(), done.end(), 0);
    const std::size_t none = n + m;
    std::fill(pred.begin(), pred.end(), none);
    bool any_source = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (supply_left[i] > kMassEps) {
        dist[i] = 0.0;
        any_source = true;
      }
    }
    if (!any_source) break;

    // Dense Dijkstra; stops at the first sink with remaining demand.
    std::size_t target = none;
    double target_dist = kInf;
    while (true) {
      std::size_t u = none;
      double best = kInf;
      for (std::size_t v = 0; v < n + m; ++v) {
        if (!done[v] && dist[v] < best) {
          best = dist[v];
          u = v;
        }
      }
      if (u == none) break;
      done[u] = 1;
      if (u >= n && demand_left[u - n] > kMassEps) {
        target = u;
        target_dist = best;
        break;
      }
      if (u < n) {
        for (std::size_t j = 0; j < m; ++j) {
          const std::size_t v = n + j;
          if (done[v]) continue;
          const double rc = std::max(0.0, cost[u * m + j] + pi[u] - pi[v]);
          if (best + rc < dist[v]) {
            dist[v] = best + rc;
            pred[v] = u;
          }
        }
      } else {
        const std::size_t j = u - n;
        for (std::size_t i = 0; i < n; ++i) {
          if (done[i] || flow[i * m + j] <= kMassEps) continue;
          const double rc = std::max(0.0, -cost[i * m + j] + pi[u] - pi[i]);
          if (best + rc < dist[i]) {
            dist[i] = best + rc;
            pred[i] = u;
          }
        }
      }
    }
    if (target == none) break;  // remaining mass is rounding residue

    for (std::size_t v = 0; v < n + m; ++v) {
      pi[v] += std::min(dist[v], target_dist);
    }

    // Bottleneck along the path.
    double delta = demand_left[target - n];
    std::size_t v = target;
    while (pred[v] != none) {
      const std::size_t u = pred[v];
      if (u >= n) delta = std::min(delta, flow[v * m + (u - n)]);  // reverse
      v = u;
    }
    delta = std::min(delta, supply_left[v]);

    v = target;
    while (pred[v] != none) {
      const std::size_t u = pred[v];
      if (u < n) {
        flow[u * m + (v - n)] += delta;
      } else {
        double& f = flow[v * m + (u - n)];
        f -= delta;
        if (f < kMassEps) f = 0.0;
      }
      v = u;
    }
    supply_left[v] -= delta;
    demand_left[target - n] -= delta;
  }
  return flow;
}

std::vector<std::size_t> hungarian_assignment(const std::vector<double>& cost,
                                              std::size_t n) {
  if (cost.size() != n * n) {
    throw InvalidInput("hungarian_assignment: cost matrix must be n x n");
  }
  // Shortest augmenting path formulation with row/column potentials,
  // 1-based internally with column 0 as the virtual start.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> assignment(n);
  for (std::size_t j = 1; j <= n; ++j) assignment[match[j] - 1] = j - 1;
  return assignment;
}

WassersteinResult wasserstein(const DiscreteMeasure& mu,
                              const DiscreteMeasure& nu, double p,
                              TransportSolver solver) {
  require_p(p);
  if (mu.dim() != nu.dim()) {
    throw InvalidInput("wasserstein: dimension mismatch (" +
                       std::to_string(mu.dim()) + " vs " +
                       std::to_string(nu.dim()) + ")");
  }
  const std::vector<double> cost = cost_matrix(mu, nu, p);
  const std::size_t n = mu.size();
  const std::size_t m = nu.size();
  bool use_hungarian = false;
  if (solver == TransportSolver::kHungarian) {
    if (!is_uniform_square(mu, nu)) {
      throw InvalidInput(
          "wasserstein: Hungarian solver needs equal-size uniform measures");
    }
    use_hungarian = true;
  } else if (solver == TransportSolver::kAuto) {
    use_hungarian = is_uniform_square(mu, nu);
  }

  std::vector<double> mass(n * m, 0.0);
  if (use_hungarian) {
    const auto assignment = hungarian_assignment(cost, n);
    for (std::size_t i = 0; i < n; ++i) {
      mass[i * m + assignment[i]] = mu.weight(i);
    }
  } else {
    mass = min_cost_transport(mu.weights(), nu.weights(), cost);
  }
  double total = 0.0;
  for (std::size_t k = 0; k < mass.size(); ++k) total += mass[k] * cost[k];
  try {
    return {std::pow(std::max(0.0, total), 1.0 / p),
            TransportPlan(mu, nu, std::move(mass), true)};
  } catch (const InvalidInput& e) {
    throw NumericalFailure(std::string("wasserstein: solver output rejected: ") +
                           e.what());
  }
}

double wasserstein_distance(const DiscreteMeasure& mu,
                            const DiscreteMeasure& nu, double p) {
  return wasserstein(mu, nu, p).distance;
}

CouplingResult coupling_from_maps(const DiscreteMeasure& mu,
                                  const SampledMap& zeta, const SampledMap& xi,
                                  double p) {
  require_p(p);
  require_same_base(mu, zeta);
  require_same_base(mu, xi);
  const DiscreteMeasure src = pushforward(mu, zeta);
  const DiscreteMeasure dst = pushforward(mu, xi);
  const std::size_t n = mu.size();
  std::vector<double> mass(n * n, 0.0);
  double c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mass[i * n + i] = mu.weight(i);
    c += mu.weight(i) * std::pow(distance(zeta.value(i), xi.value(i)), p);
  }
  return {TransportPlan(src, dst, std::move(mass), false),
          std::pow(c, 1.0 / p)};
}

MeasureCloud::MeasureCloud(std::vector<DiscreteMeasure> members)
    : members_(std::move(members)) {
  if (members_.empty()) throw InvalidInput("MeasureCloud: empty cloud");
  const std::size_t d = members_.front().dim();
  for (const auto& m : members_) {
    if (m.dim() != d) throw InvalidInput("MeasureCloud: mixed dimensions");
  }
}

CloudDistance dist_to_cloud(const DiscreteMeasure& mu,
                            const MeasureCloud& cloud, double p) {
  std::vector<double> d(cloud.size());
  parallel_for(cloud.size(), [&](std::size_t k) {
    d[k] = wasserstein_distance(mu, cloud[k], p);
  });
  CloudDistance best{d[0], 0};
  for (std::size_t k = 1; k < d.size(); ++k) {
    if (d[k] < best.distance) best = {d[k], k};
  }
  return best;
}

double hausdorff(const MeasureCloud& a, const MeasureCloud& b, double p) {
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  std::vector<double> d(na * nb);
  parallel_for(na * nb, [&](std::size_t k) {
    d[k] = wasserstein_distance(a[k / nb], b[k % nb], p);
  });
  double h = 0.0;
  for (std::size_t i = 0; i < na; ++i) {
    double inf = kInf;
    for (std::size_t j = 0; j < nb; ++j) inf = std::min(inf, d[i * nb + j]);
    h = std::max(h, inf);
  }
  for (std::size_t j = 0; j < nb; ++j) {
    double inf = kInf;
    for (std::size_t i = 0; i < na; ++i) inf = std::min(inf, d[i * nb + j]);
    h = std::max(h, inf);
  }
  return h;
}

double delta_local(const MeasureCloud& a, const MeasureCloud& b,
                   const DiscreteMeasure& center, double radius, double p) {
  if (!(radius > 0.0)) throw InvalidInput("delta_local: radius must be > 0");
  std::vector<double> d(a.size(), 0.0);
  parallel_for(a.size(), [&](std::size_t k) {
    if (wasserstein_distance(a[k], center, p) <= radius) {
      d[k] = dist_to_cloud(a[k], b, p).distance;
    }
  });
  return *std::max_element(d.begin(), d.end());
}

}  // namespace contincl

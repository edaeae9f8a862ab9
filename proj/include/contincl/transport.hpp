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

// Exact optimal transport between discrete measures and distances between
// finite clouds of measures.
//
// The transport problem is solved as a min-cost flow on the bipartite graph
// of atom pairs (successive shortest paths with Johnson potentials). Equal
// size uniform measures take an O(n^3) Hungarian-assignment fast path, since
// an optimal plan then exists among permutation matrices.

#ifndef CONTINCL_TRANSPORT_HPP_
#define CONTINCL_TRANSPORT_HPP_

#include <cstddef>
#include <utility>
#include <vector>

#include "contincl/measure.hpp"

namespace contincl {

inline constexpr double kPlanMarginalTol = 1e-10;

class TransportPlan {
 public:
  // `mass` is row-major n x m with n = source.size(), m = target.size().
  TransportPlan(DiscreteMeasure source, DiscreteMeasure target,
                std::vector<double> mass, bool optimal = false);

  const DiscreteMeasure& source() const { return source_; }
  const DiscreteMeasure& target() const { return target_; }
  std::size_t rows() const { return source_.size(); }
  std::size_t cols() const { return target_.size(); }
  double mass(std::size_t i, std::size_t j) const {
    return mass_[i * target_.size() + j];
  }
  const std::vector<double>& masses() const { return mass_; }
  bool optimal() const { return optimal_; }

  // sum_ij gamma_ij |x_i - y_j|^p.
  double cost(double p) const;

  // Largest deviation of row/column sums from the marginal weights.
  double marginal_error() const;

  struct Entry {
    std::size_t source_idx;
    std::size_t target_idx;
    double mass;
  };
  // Nonzero entries in row-major order.
  std::vector<Entry> entries() const;

 private:
  DiscreteMeasure source_;
  DiscreteMeasure target_;
  std::vector<double> mass_;
  bool optimal_;
};

enum class TransportSolver { kAuto, kNetworkFlow, kHungarian };

struct WassersteinResult {
  double distance = 0.0;
  TransportPlan plan;
};

// W_p(mu, nu) and an optimal plan.
WassersteinResult wasserstein(const DiscreteMeasure& mu,
                              const DiscreteMeasure& nu, double p,
                              TransportSolver solver = TransportSolver::kAuto);

// Just the distance.
double wasserstein_distance(const DiscreteMeasure& mu,
                            const DiscreteMeasure& nu, double p);

// Low-level entry points, exposed for tests and for callers that already
// hold a cost matrix. `cost` is row-major supply.size() x demand.size().
std::vector<double> min_cost_transport(const std::vector<double>& supply,
                                       const std::vector<double>& demand,
                                       const std::vector<double>& cost);
// Returns assignment[i] = column matched to row i (square cost matrix).
std::vector<std::size_t> hungarian_assignment(const std::vector<double>& cost,
                                              std::size_t n);

struct CouplingResult {
  TransportPlan plan;
  double cost = 0.0;  // ||xi - zeta||_{L^p(mu)}
};

// The plan (zeta, xi)#mu between zeta#mu and xi#mu, with its L^p cost. The
// cost bounds W_p(zeta#mu, xi#mu) from above.
CouplingResult coupling_from_maps(const DiscreteMeasure& mu,
                                  const SampledMap& zeta, const SampledMap& xi,
                                  double p);

// A nonempty finite family of measures used as a stand-in for reachable
// sets and for sampled pieces of constraint sets.
class MeasureCloud {
 public:
  explicit MeasureCloud(std::vector<DiscreteMeasure> members);
  const std::vector<DiscreteMeasure>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  const DiscreteMeasure& operator[](std::size_t i) const { return members_[i]; }

 private:
  std::vector<DiscreteMeasure> members_;
};

struct CloudDistance {
  double distance = 0.0;
  std::size_t index = 0;
};

// min over members of W_p(mu, member); ties go to the lowest index.
CloudDistance dist_to_cloud(const DiscreteMeasure& mu,
                            const MeasureCloud& cloud, double p);

// Hausdorff distance between two clouds in (P_p, W_p).
double hausdorff(const MeasureCloud& a, const MeasureCloud& b, double p);

// sup over members of A inside the closed ball B(center, R) of their
// distance to B; 0 when no member of A lies in the ball.
double delta_local(const MeasureCloud& a, const MeasureCloud& b,
                   const DiscreteMeasure& center, double radius, double p);

}  // namespace contincl

#endif  // CONTINCL_TRANSPORT_HPP_

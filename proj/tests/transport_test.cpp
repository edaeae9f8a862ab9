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
#include <numeric>

#include <gtest/gtest.h>

#include "contincl/errors.hpp"
#include "contincl/lp.hpp"
#include "test_util.hpp"

namespace contincl {
namespace {

using testing::line;
using testing::random_map;
using testing::random_measure;

double brute_force(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                   double p) {
  std::vector<std::size_t> perm(mu.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      c += std::pow(distance(mu.point(i), nu.point(perm[i])), p);
    }
    best = std::min(best, c / static_cast<double>(perm.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::pow(best, 1.0 / p);
}

TEST(Wasserstein, Examples) {
  EXPECT_NEAR(wasserstein_distance(DiscreteMeasure::dirac({0.0, 0.0}),
                                   DiscreteMeasure::dirac({3.0, 4.0}), 1.5),
              5.0, 1e-12);
  SplitMix64 rng(1);
  const DiscreteMeasure mu = random_measure(rng, 5, 2);
  EXPECT_EQ(wasserstein_distance(mu, mu, 2.0), 0.0);
  EXPECT_NEAR(wasserstein_distance(line({0.0, 1.0}, {0.5, 0.5}),
                                   line({0.0, 2.0}, {0.5, 0.5}), 2.0),
              std::sqrt(0.5), 1e-15);
}

TEST(Wasserstein, RejectsBadArguments) {
  const DiscreteMeasure a = line({0.0}, {1.0});
  EXPECT_THROW(wasserstein_distance(a, a, 1.0), InvalidInput);
  EXPECT_THROW(wasserstein_distance(a, DiscreteMeasure::dirac({0.0, 0.0}), 2.0),
               InvalidInput);
}

TEST(Wasserstein, MatchesPermutationBruteForce) {
  SplitMix64 rng(2);
  const double ps[] = {1.5, 2.0, 3.0};
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng.index(6);
    const std::size_t d = 1 + rng.index(3);
    const double p = ps[i % 3];
    const DiscreteMeasure mu = random_measure(rng, n, d, 2.0, true);
    const DiscreteMeasure nu = random_measure(rng, n, d, 2.0, true);
    const double want = brute_force(mu, nu, p);
    for (TransportSolver s : {TransportSolver::kNetworkFlow,
                              TransportSolver::kHungarian}) {
      EXPECT_NEAR(wasserstein(mu, nu, p, s).distance, want, 1e-9);
    }
  }
}

TEST(Wasserstein, NetworkFlowMatchesGeneralLp) {
  SplitMix64 rng(3);
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = 1 + rng.index(5), m = 1 + rng.index(5);
    const DiscreteMeasure mu = random_measure(rng, n, 2);
    const DiscreteMeasure nu = random_measure(rng, m, 2);
    LinearProgram lp;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        lp.objective.push_back(std::pow(distance(mu.point(a), nu.point(b)), 2.0));
      }
    }
    for (std::size_t a = 0; a < n; ++a) {
      std::vector<double> row(n * m, 0.0);
      for (std::size_t b = 0; b < m; ++b) row[a * m + b] = 1.0;
      lp.a_eq.push_back(row);
      lp.b_eq.push_back(mu.weight(a));
    }
    for (std::size_t b = 0; b < m; ++b) {
      std::vector<double> row(n * m, 0.0);
      for (std::size_t a = 0; a < n; ++a) row[a * m + b] = 1.0;
      lp.a_eq.push_back(row);
      lp.b_eq.push_back(nu.weight(b));
    }
    const LpResult r = solve_lp(lp);
    ASSERT_EQ(r.status, LpStatus::kOptimal);
    EXPECT_NEAR(wasserstein_distance(mu, nu, 2.0), std::sqrt(r.value), 1e-9);
  }
}

TEST(Wasserstein, TriangleInequality) {
  SplitMix64 rng(4);
  for (int i = 0; i < 200; ++i) {
    const std::size_t d = 1 + rng.index(3);
    const double p = 1.2 + rng.uniform() * 2.5;
    const DiscreteMeasure a = random_measure(rng, 1 + rng.index(6), d);
    const DiscreteMeasure b = random_measure(rng, 1 + rng.index(6), d);
    const DiscreteMeasure c = random_measure(rng, 1 + rng.index(6), d);
    EXPECT_LE(wasserstein_distance(a, c, p),
              wasserstein_distance(a, b, p) + wasserstein_distance(b, c, p) + 1e-9);
  }
}

TEST(Wasserstein, PlanMarginalsAndCost) {
  SplitMix64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const DiscreteMeasure mu = random_measure(rng, 1 + rng.index(7), 2);
    const DiscreteMeasure nu = random_measure(rng, 1 + rng.index(7), 2);
    const WassersteinResult r = wasserstein(mu, nu, 2.5);
    EXPECT_LE(r.plan.marginal_error(), kPlanMarginalTol);
    EXPECT_TRUE(r.plan.optimal());
    for (double m : r.plan.masses()) EXPECT_GE(m, 0.0);
    EXPECT_NEAR(std::pow(r.plan.cost(2.5), 1.0 / 2.5), r.distance, 1e-12);
  }
}

TEST(TransportPlan, RejectsBadMarginals) {
  const DiscreteMeasure a = line({0.0, 1.0}, {0.5, 0.5});
  EXPECT_THROW(TransportPlan(a, a, {0.5, 0.0, 0.0, 0.3}), InvalidInput);
  EXPECT_THROW(TransportPlan(a, a, {0.5, 0.0, 0.0}), InvalidInput);
}

TEST(Hungarian, SmallAssignment) {
  const std::vector<double> cost = {4, 1, 3, 2, 0, 5, 3, 2, 2};
  const auto a = hungarian_assignment(cost, 3);
  double total = 0.0;
  for (std::size_t i = 0; i < 3; ++i) total += cost[i * 3 + a[i]];
  EXPECT_EQ(total, 5.0);
}

TEST(CouplingFromMaps, Examples) {
  const DiscreteMeasure mu = line({0.0, 1.0}, {0.5, 0.5});
  const SampledMap id = SampledMap::identity(mu);
  EXPECT_EQ(coupling_from_maps(mu, id, id, 2.0).cost, 0.0);
  const DiscreteMeasure d = line({0.0}, {1.0});
  EXPECT_DOUBLE_EQ(
      coupling_from_maps(d, SampledMap(d, {{0.0}}), SampledMap(d, {{3.0}}), 2.0).cost,
      3.0);
  const SampledMap shifted(mu, {{1.0}, {2.0}});
  EXPECT_DOUBLE_EQ(coupling_from_maps(mu, id, shifted, 2.0).cost, 1.0);
}

TEST(CouplingFromMaps, BoundsTheDistance) {
  SplitMix64 rng(6);
  for (int i = 0; i < 200; ++i) {
    const std::size_t d = 1 + rng.index(3);
    const DiscreteMeasure mu = random_measure(rng, 1 + rng.index(6), d);
    const SampledMap z = random_map(rng, mu, 2.0);
    const SampledMap x = random_map(rng, mu, 2.0);
    const double p = 1.5 + rng.uniform() * 1.5;
    const CouplingResult c = coupling_from_maps(mu, z, x, p);
    EXPECT_LE(wasserstein_distance(pushforward(mu, z), pushforward(mu, x), p),
              c.cost + 1e-9);
    EXPECT_LE(c.plan.marginal_error(), kPlanMarginalTol);
  }
}

TEST(DistToCloud, Examples) {
  SplitMix64 rng(7);
  const DiscreteMeasure mu = random_measure(rng, 3, 2);
  const CloudDistance self = dist_to_cloud(mu, MeasureCloud({mu}), 2.0);
  EXPECT_EQ(self.distance, 0.0);
  EXPECT_EQ(self.index, 0u);
  const CloudDistance d = dist_to_cloud(
      line({0.0}, {1.0}), MeasureCloud({line({1.0}, {1.0}), line({3.0}, {1.0})}), 2.0);
  EXPECT_DOUBLE_EQ(d.distance, 1.0);
  EXPECT_EQ(d.index, 0u);
  const CloudDistance tie = dist_to_cloud(
      line({0.0, 1.0}, {0.5, 0.5}),
      MeasureCloud({line({0.0}, {1.0}), line({1.0}, {1.0})}), 2.0);
  EXPECT_NEAR(tie.distance, std::sqrt(0.5), 1e-15);
  EXPECT_EQ(tie.index, 0u);
}

TEST(Hausdorff, Examples) {
  const MeasureCloud a({line({0.0}, {1.0}), line({2.0}, {1.0})});
  EXPECT_EQ(hausdorff(a, a, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(hausdorff(MeasureCloud({line({0.0}, {1.0})}),
                             MeasureCloud({line({1.0}, {1.0})}), 2.0),
                   1.0);
  EXPECT_DOUBLE_EQ(hausdorff(a, MeasureCloud({line({0.0}, {1.0})}), 2.0), 2.0);
}

TEST(DeltaLocal, Examples) {
  const MeasureCloud a({line({0.0}, {1.0}), line({2.0}, {1.0})});
  const DiscreteMeasure c = line({0.0}, {1.0});
  EXPECT_EQ(delta_local(a, a, c, 5.0, 2.0), 0.0);
  EXPECT_EQ(delta_local(MeasureCloud({line({5.0}, {1.0})}),
                        MeasureCloud({c}), c, 1.0, 2.0),
            0.0);
  EXPECT_DOUBLE_EQ(delta_local(MeasureCloud({c, line({0.5}, {1.0})}),
                               MeasureCloud({c}), c, 0.6, 2.0),
                   0.5);
}

}  // namespace
}  // namespace contincl

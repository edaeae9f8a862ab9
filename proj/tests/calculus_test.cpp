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

#include "contincl/calculus.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "contincl/errors.hpp"
#include "test_util.hpp"

namespace contincl {
namespace {

using testing::line;
using testing::random_map;
using testing::random_measure;

TEST(DualityMap, Examples) {
  const Point v = {0.3, -1.2, 2.0};
  EXPECT_EQ(duality_map(v, 2.0), v);
  EXPECT_EQ(duality_map(Point{0.0, 0.0}, 1.5), (Point{0.0, 0.0}));
  const Point j = duality_map(Point{3.0, 4.0}, 3.0);
  EXPECT_NEAR(j[0], 15.0, 1e-12);
  EXPECT_NEAR(j[1], 20.0, 1e-12);
}

TEST(DualityMap, PairingIdentities) {
  SplitMix64 rng(1);
  for (int i = 0; i < 500; ++i) {
    Point v(1 + rng.index(4));
    for (double& c : v) c = rng.uniform(-3, 3);
    const double p = 1.05 + rng.uniform() * 3.0;
    const Point j = duality_map(v, p);
    const double n = norm(v);
    EXPECT_NEAR(dot(v, j), std::pow(n, p), 1e-12 * std::max(1.0, std::pow(n, p)));
    EXPECT_NEAR(norm(j), std::pow(n, p - 1.0),
                1e-12 * std::max(1.0, std::pow(n, p - 1.0)));
  }
}

TEST(Remainder, Examples) {
  EXPECT_EQ(remainder(0.7, 0.0, 0.0, 3.0, 2.5), 0.0);
  EXPECT_EQ(remainder(0.7, 0.0, 0.0, 3.0, 1.5), 0.0);
  EXPECT_EQ(remainder(0.0, 1.0, 2.0, 3.0, 3.0), 0.0);
  EXPECT_NEAR(remainder(0.1, 1.0, 0.0, 42.0, 2.0), 0.01, 1e-16);
  EXPECT_NEAR(remainder(0.5, 1.0, 1.0, 0.0, 1.5), 2.0 * std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(remainder(-0.5, 1.0, 2.0, 1.0, 3.0), 6.25, 1e-14);
}

TEST(SuperdiffTerms, StaticMeasures) {
  const DiscreteMeasure mu = line({0.0}, {1.0});
  const DiscreteMeasure nu = line({1.0}, {1.0});
  const SuperdiffTerms t = superdiff_terms(mu, nu, SampledMap::zero(mu),
                                           SampledMap::zero(nu), 0.5, 2.0);
  EXPECT_EQ(t.lhs, 0.0);
  EXPECT_EQ(t.linear, 0.0);
  EXPECT_EQ(t.remainder, 0.0);
  EXPECT_EQ(t.gap, 0.0);

  SplitMix64 rng(2);
  const DiscreteMeasure m = random_measure(rng, 4, 2);
  EXPECT_EQ(superdiff_gap(m, m, SampledMap::zero(m), SampledMap::zero(m), 0.3, 3.0),
            0.0);
}

TEST(SuperdiffTerms, SingleAtomClosedForm) {
  // lhs = (0.9^2 - 1)/2, linear = 0.1 (1)(-1), remainder = 0.1^2.
  const DiscreteMeasure mu = line({0.0}, {1.0});
  const DiscreteMeasure nu = line({1.0}, {1.0});
  const SuperdiffTerms t = superdiff_terms(mu, nu, SampledMap(mu, {{1.0}}),
                                           SampledMap(nu, {{0.0}}), 0.1, 2.0);
  EXPECT_NEAR(t.lhs, -0.095, 1e-15);
  EXPECT_NEAR(t.linear, -0.1, 1e-15);
  EXPECT_NEAR(t.remainder, 0.01, 1e-16);
  EXPECT_NEAR(t.gap, -0.005, 1e-15);
}

TEST(SuperdiffTerms, RequiresMapsOnTheirMeasures) {
  const DiscreteMeasure mu = line({0.0}, {1.0});
  const DiscreteMeasure nu = line({1.0}, {1.0});
  EXPECT_THROW(superdiff_terms(mu, nu, SampledMap::zero(nu), SampledMap::zero(nu),
                               0.1, 2.0),
               InvalidInput);
}

TEST(SuperdiffGap, RandomInstancesAreNonpositive) {
  SplitMix64 rng(3);
  const double ps[] = {1.5, 2.0, 3.0};
  for (int i = 0; i < 200; ++i) {
    const std::size_t d = 1 + rng.index(3);
    const DiscreteMeasure mu = random_measure(rng, 1 + rng.index(8), d);
    const DiscreteMeasure nu = random_measure(rng, 1 + rng.index(8), d);
    const SampledMap z = random_map(rng, mu);
    const SampledMap x = random_map(rng, nu);
    EXPECT_LE(superdiff_gap(mu, nu, z, x, rng.uniform(-1, 1), ps[i % 3]), 1e-9);
  }
}

TEST(PnormGap, Examples) {
  const Point x = {0.4, -1.0, 2.0};
  for (double p : {1.3, 2.0, 3.5}) {
    EXPECT_EQ(pnorm_bound(x, x, p), 0.0);
    EXPECT_LE(pnorm_gap(x, x, p), 0.0);
  }
  const Point y = {1.0, 2.0};
  EXPECT_NEAR(pnorm_gap(Point{0.0, 0.0}, y, 2.0), 0.0, 1e-15);
  EXPECT_NEAR(pnorm_bound(Point{0.0}, Point{2.0}, 1.5),
              std::pow(2.0, 0.5) / 0.5 * std::pow(2.0, 1.5), 1e-12);
}

TEST(PnormGap, RandomPairsR3) {
  SplitMix64 rng(4);
  for (int i = 0; i < 10000; ++i) {
    Point x(3), y(3);
    for (double& c : x) c = rng.uniform(-2, 2);
    for (double& c : y) c = rng.uniform(-2, 2);
    EXPECT_LE(pnorm_gap(x, y, 1.5), 1e-12);
  }
}

TEST(VerifyInequalities, PassesAndIsDeterministic) {
  const InequalityReport a = verify_inequalities(7, 100, 2000);
  const InequalityReport b = verify_inequalities(7, 100, 2000);
  EXPECT_EQ(a.instances, 100u);
  EXPECT_LE(a.max_gap, 1e-9);
  EXPECT_LE(a.max_pnorm_gap, 1e-12);
  EXPECT_EQ(a.max_gap, b.max_gap);
  EXPECT_EQ(a.branch_counts, b.branch_counts);
  EXPECT_EQ(a.branch_counts.at("pnorm_p_lt_2"), 2000u);
  EXPECT_GT(a.branch_counts.at("remainder_p_lt_2"), 0u);
  EXPECT_GT(a.branch_counts.at("remainder_p_ge_2"), 0u);
}

}  // namespace
}  // namespace contincl

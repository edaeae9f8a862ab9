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

#include "contincl/lp.hpp"

#include <gtest/gtest.h>

#include "contincl/rng.hpp"

namespace contincl {
namespace {

TEST(SolveLp, TextbookProgram) {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18.
  LinearProgram lp;
  lp.objective = {-3.0, -5.0};
  lp.a_ub = {{1, 0}, {0, 2}, {3, 2}};
  lp.b_ub = {4, 12, 18};
  const LpResult r = solve_lp(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.value, -36.0, 1e-12);
  EXPECT_NEAR(r.x[0], 2.0, 1e-12);
  EXPECT_NEAR(r.x[1], 6.0, 1e-12);
}

TEST(SolveLp, EqualityAndNegativeRhs) {
  // min x + y s.t. x + y = 2, -x <= -0.5.
  LinearProgram lp;
  lp.objective = {1.0, 2.0};
  lp.a_eq = {{1, 1}};
  lp.b_eq = {2};
  lp.a_ub = {{-1, 0}};
  lp.b_ub = {-0.5};
  const LpResult r = solve_lp(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.value, 2.0, 1e-12);
}

TEST(SolveLp, DetectsInfeasibleAndUnbounded) {
  LinearProgram inf;
  inf.objective = {1.0};
  inf.a_ub = {{1.0}, {-1.0}};
  inf.b_ub = {1.0, -2.0};
  EXPECT_EQ(solve_lp(inf).status, LpStatus::kInfeasible);
  LinearProgram unb;
  unb.objective = {-1.0, 0.0};
  unb.a_ub = {{0.0, 1.0}};
  unb.b_ub = {1.0};
  EXPECT_EQ(solve_lp(unb).status, LpStatus::kUnbounded);
}

TEST(SolveLp, RandomBoxProgramsHitAVertexOptimum) {
  // min c^T x over 0 <= x <= 1 has value sum of negative c_i.
  SplitMix64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng.index(8);
    LinearProgram lp;
    double want = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = rng.uniform(-1, 1);
      lp.objective.push_back(c);
      want += std::min(c, 0.0);
      std::vector<double> row(n, 0.0);
      row[i] = 1.0;
      lp.a_ub.push_back(row);
      lp.b_ub.push_back(1.0);
    }
    const LpResult r = solve_lp(lp);
    ASSERT_EQ(r.status, LpStatus::kOptimal);
    EXPECT_NEAR(r.value, want, 1e-12);
  }
}

}  // namespace
}  // namespace contincl

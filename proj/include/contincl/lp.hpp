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

// Dense two-phase primal simplex.
//
//   minimize    c^T x
//   subject to  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0.
//
// Meant for the small programs that appear here (a few hundred rows, a few
// dozen columns). Transport problems go through the network-flow solver in
// transport.hpp instead.

#ifndef CONTINCL_LP_HPP_
#define CONTINCL_LP_HPP_

#include <vector>

namespace contincl {

struct LinearProgram {
  std::vector<double> objective;                // c, size n
  std::vector<std::vector<double>> a_ub;        // rows of size n
  std::vector<double> b_ub;
  std::vector<std::vector<double>> a_eq;
  std::vector<double> b_eq;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  double value = 0.0;
  std::vector<double> x;
};

LpResult solve_lp(const LinearProgram& lp);

}  // namespace contincl

#endif  // CONTINCL_LP_HPP_

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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "contincl/errors.hpp"

namespace contincl {
namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;
constexpr double kFeasTol = 1e-9;

// Rows 0..m-1 are constraints and row m is the reduced-cost row. Column
// `cols` holds the right-hand side; the objective row keeps -z there.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0),
        basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double& cost(std::size_t c) { return at(rows_, c); }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    double* prow = &at(pr, 0);
    for (std::size_t c = 0; c <= cols_; ++c) prow[c] /= p;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      double* row = &at(r, 0);
      const double f = row[pc];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) row[c] -= f * prow[c];
      row[pc] = 0.0;
    }
    basis_[pr] = pc;
  }

  // Rewrites the objective row as c - c_B B^-1 A for objective `c`.
  void set_objective(const std::vector<double>& c) {
    for (std::size_t j = 0; j <= cols_; ++j) cost(j) = j < cols_ ? c[j] : 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      const double cb = c[basis_[r]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) cost(j) -= cb * at(r, j);
    }
  }

  // Minimizes the current objective with columns [0, allowed) eligible to
  // enter. Dantzig pricing, switching to Bland's rule after a run of
  // degenerate pivots so that cycling cannot occur. Returns false when
  // unbounded.
  bool optimize(std::size_t allowed) {
    const std::size_t max_iter = 20000 + 20 * (rows_ + cols_);
    std::size_t degenerate = 0;
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
      const bool bland = degenerate > 50;
      std::size_t enter = cols_;
      double most = -kCostTol;
      for (std::size_t c = 0; c < allowed; ++c) {
        if (cost(c) < most) {
          enter = c;
          if (bland) break;
          most = cost(c);
        }
      }
      if (enter == cols_) return true;
      std::size_t leave = rows_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows_; ++r) {
        const double a = at(r, enter);
        if (a > kPivotTol) {
          const double ratio = rhs(r) / a;
          if (ratio < best - 1e-14 ||
              (ratio <= best + 1e-14 && leave < rows_ &&
               basis_[r] < basis_[leave])) {
            best = ratio;
            leave = r;
          }
        }
      }
      if (leave == rows_) return false;
      degenerate = best <= 1e-14 ? degenerate + 1 : 0;
      pivot(leave, enter);
    }
    throw NumericalFailure("solve_lp: iteration limit reached");
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
  const std::size_t n = lp.objective.size();
  const std::size_t m_ub = lp.a_ub.size();
  const std::size_t m_eq = lp.a_eq.size();
  if (lp.b_ub.size() != m_ub || lp.b_eq.size() != m_eq) {
    throw InvalidInput("solve_lp: row/rhs count mismatch");
  }
  const std::size_t m = m_ub + m_eq;
  // Inequality rows with b >= 0 start with their slack basic; the others
  // (and all equality rows) get an artificial.
  std::vector<std::size_t> art_row;
  for (std::size_t r = 0; r < m; ++r) {
    const bool is_ub = r < m_ub;
    const double b = is_ub ? lp.b_ub[r] : lp.b_eq[r - m_ub];
    if (!is_ub || b < 0.0) art_row.push_back(r);
  }
  const std::size_t art0 = n + m_ub;
  const std::size_t cols = art0 + art_row.size();
  Tableau tab(m, cols);
  std::size_t next_art = art0;
  for (std::size_t r = 0; r < m; ++r) {
    const bool is_ub = r < m_ub;
    const auto& row = is_ub ? lp.a_ub[r] : lp.a_eq[r - m_ub];
    if (row.size() != n) throw InvalidInput("solve_lp: row width mismatch");
    const double b = is_ub ? lp.b_ub[r] : lp.b_eq[r - m_ub];
    const double sign = b < 0.0 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < n; ++c) tab.at(r, c) = sign * row[c];
    if (is_ub) tab.at(r, n + r) = sign;
    tab.rhs(r) = sign * b;
    if (!is_ub || b < 0.0) {
      tab.at(r, next_art) = 1.0;
      tab.basis()[r] = next_art++;
    } else {
      tab.basis()[r] = n + r;
    }
  }

  LpResult result;
  if (!art_row.empty()) {
    std::vector<double> phase1(cols, 0.0);
    for (std::size_t c = art0; c < cols; ++c) phase1[c] = 1.0;
    tab.set_objective(phase1);
    tab.optimize(cols);
    double infeasibility = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      if (tab.basis()[r] >= art0) infeasibility += tab.rhs(r);
    }
    if (infeasibility > kFeasTol) {
      result.status = LpStatus::kInfeasible;
      return result;
    }
    // Drive remaining artificials out; rows where that is impossible are
    // redundant and keep a zero-valued artificial that can never re-enter.
    for (std::size_t r = 0; r < m; ++r) {
      if (tab.basis()[r] < art0) continue;
      for (std::size_t c = 0; c < art0; ++c) {
        if (std::abs(tab.at(r, c)) > 1e-9) {
          tab.pivot(r, c);
          break;
        }
      }
    }
  }

  std::vector<double> phase2(cols, 0.0);
  for (std::size_t c = 0; c < n; ++c) phase2[c] = lp.objective[c];
  tab.set_objective(phase2);
  if (!tab.optimize(art0)) {
    result.status = LpStatus::kUnbounded;
    return result;
  }
  result.status = LpStatus::kOptimal;
  result.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t b = tab.basis()[r];
    if (b < n) result.x[b] = std::max(0.0, tab.rhs(r));
  }
  result.value = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    result.value += lp.objective[c] * result.x[c];
  }
  return result;
}

}  // namespace contincl

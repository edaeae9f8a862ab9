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

#ifndef CONTINCL_STEP_FUNCTION_HPP_
#define CONTINCL_STEP_FUNCTION_HPP_

#include <vector>

namespace contincl {

// Right-continuous, nonnegative piecewise-constant function of time.
//
// With breakpoints b_1 < ... < b_k and values v_0, ..., v_k the function is
// v_0 on (-inf, b_1), v_i on [b_i, b_{i+1}) and v_k on [b_k, +inf). Used for
// the integrable bounds m(.), l(.), L(.) and tube moduli.
class StepFunction {
 public:
  StepFunction() : values_{0.0} {}
  explicit StepFunction(double constant);
  StepFunction(std::vector<double> breakpoints, std::vector<double> values);

  double operator()(double t) const;

  // Integral over [a, b]; returns the negated integral when b < a.
  double integral(double a, double b) const;

  StepFunction operator+(const StepFunction& other) const;
  StepFunction scaled(double factor) const;

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  bool is_constant() const { return breakpoints_.empty(); }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

}  // namespace contincl

#endif  // CONTINCL_STEP_FUNCTION_HPP_

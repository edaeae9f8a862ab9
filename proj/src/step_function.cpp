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

#include "contincl/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <set>

#include "contincl/errors.hpp"

namespace contincl {

StepFunction::StepFunction(double constant) : values_{constant} {
  if (!(constant >= 0.0) || !std::isfinite(constant)) {
    throw InvalidInput("StepFunction: values must be finite and nonnegative");
  }
}

StepFunction::StepFunction(std::vector<double> breakpoints,
                           std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (values_.size() != breakpoints_.size() + 1) {
    throw InvalidInput(
        "StepFunction: need exactly one more value than breakpoints");
  }
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] > breakpoints_[i - 1])) {
      throw InvalidInput("StepFunction: breakpoints must be increasing");
    }
  }
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidInput("StepFunction: values must be finite and nonnegative");
    }
  }
}

double StepFunction::operator()(double t) const {
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  return values_[static_cast<std::size_t>(
      std::distance(breakpoints_.begin(), it))];
}

double StepFunction::integral(double a, double b) const {
  if (b < a) return -integral(b, a);
  double total = 0.0;
  double left = a;
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), a);
  std::size_t piece =
      static_cast<std::size_t>(std::distance(breakpoints_.begin(), it));
  while (left < b) {
    const double right =
        piece < breakpoints_.size() ? std::min(b, breakpoints_[piece]) : b;
    total += values_[piece] * (right - left);
    left = right;
    ++piece;
  }
  return total;
}

StepFunction StepFunction::operator+(const StepFunction& other) const {
  std::set<double> merged(breakpoints_.begin(), breakpoints_.end());
  merged.insert(other.breakpoints_.begin(), other.breakpoints_.end());
  std::vector<double> bps(merged.begin(), merged.end());
  std::vector<double> vals;
  vals.reserve(bps.size() + 1);
  if (bps.empty()) {
    vals.push_back(values_[0] + other.values_[0]);
  } else {
    vals.push_back((*this)(bps.front() - 1.0) + other(bps.front() - 1.0));
    for (double b : bps) vals.push_back((*this)(b) + other(b));
  }
  return StepFunction(std::move(bps), std::move(vals));
}

StepFunction StepFunction::scaled(double factor) const {
  std::vector<double> vals = values_;
  for (double& v : vals) v *= factor;
  return StepFunction(breakpoints_, std::move(vals));
}

}  // namespace contincl

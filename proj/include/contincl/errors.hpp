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

#ifndef CONTINCL_ERRORS_HPP_
#define CONTINCL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace contincl {

// Bad arguments: dimension mismatches, invalid exponents, malformed weights.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A solver failed to reach its tolerance, or produced a non-finite value.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A user-supplied regularity bound (m, l, L, ...) was contradicted by a
// spot check.
class HypothesisViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on set membership failed (e.g. a state outside the
// constraint set handed to a cone test).
class ConstraintViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace contincl

#endif  // CONTINCL_ERRORS_HPP_

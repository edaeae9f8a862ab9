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

// Symbolic generator families used by scenario files, with the constants
// m, l, L each one satisfies.

#ifndef CONTINCL_FAMILIES_HPP_
#define CONTINCL_FAMILIES_HPP_

#include <string>
#include <vector>

#include "contincl/dynamics.hpp"

namespace contincl {

struct GeneratorSpec {
  std::string name;
  Generator generator;
  double m = 0.0;  // |v(t,mu)(x)| <= m (1 + |x| + M_p(mu))
  double l = 0.0;  // Lipschitz constant in x
  double cap_l = 0.0;  // Lipschitz constant in mu for W_p
};

// v = c.
GeneratorSpec constant_family(Point c);

// v = A x + b, A given row-major d x d. Uses the Frobenius norm of A as
// both growth and Lipschitz constant.
GeneratorSpec linear_family(std::vector<double> a, Point b);

// v = gain (proj_B(x) - x): pulls points toward the ball B(center, radius)
// and vanishes on it.
GeneratorSpec attraction_to_ball_family(Point center, double radius,
                                        double gain);

// v = gain (mean(mu) - x): consensus-type interaction through the
// barycenter of the current state.
GeneratorSpec interaction_family(double gain);

// SetValuedField over `specs` with constant m, l, L equal to the maxima of
// the family constants.
SetValuedField make_field(std::size_t dim, const std::vector<GeneratorSpec>& specs,
                          bool convexified, double p = 2.0,
                          const ProbeOptions& probes = {});

}  // namespace contincl

#endif  // CONTINCL_FAMILIES_HPP_

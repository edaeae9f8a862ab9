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

#include "contincl/families.hpp"

#include <algorithm>
#include <cmath>

#include "contincl/errors.hpp"

namespace contincl {

GeneratorSpec constant_family(Point c) {
  GeneratorSpec spec;
  spec.name = "constant";
  spec.m = norm(c);
  const std::size_t d = c.size();
  const double m = spec.m;
  spec.generator = [c = std::move(c), d, m](double, const DiscreteMeasure&) {
    return VelocityField::unchecked(
        d, [c](double, const Point&) { return c; }, StepFunction(m),
        StepFunction(0.0));
  };
  return spec;
}

GeneratorSpec linear_family(std::vector<double> a, Point b) {
  const std::size_t d = b.size();
  if (a.size() != d * d) {
    throw InvalidInput("linear family: matrix must be d x d");
  }
  double frob = 0.0;
  for (double x : a) frob += x * x;
  frob = std::sqrt(frob);
  GeneratorSpec spec;
  spec.name = "linear";
  spec.m = std::max(frob, norm(b));
  spec.l = frob;
  const double m = spec.m;
  spec.generator = [a = std::move(a), b = std::move(b), d, m, frob](
                       double, const DiscreteMeasure&) {
    return VelocityField::unchecked(
        d,
        [a, b, d](double, const Point& x) {
          Point v = b;
          for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c) v[r] += a[r * d + c] * x[c];
          }
          return v;
        },
        StepFunction(m), StepFunction(frob));
  };
  return spec;
}

GeneratorSpec attraction_to_ball_family(Point center, double radius,
                                        double gain) {
  if (!(radius >= 0.0) || !(gain >= 0.0)) {
    throw InvalidInput("attraction family: radius and gain must be >= 0");
  }
  const std::size_t d = center.size();
  GeneratorSpec spec;
  spec.name = "attraction-to-ball";
  // |x - proj(x)| <= |x| + |c| + r.
  spec.m = gain * std::max(1.0, norm(center) + radius);
  spec.l = gain;
  const double m = spec.m;
  spec.generator = [center = std::move(center), radius, gain, d, m](
                       double, const DiscreteMeasure&) {
    return VelocityField::unchecked(
        d,
        [center, radius, gain](double, const Point& x) {
          const Point off = sub(x, center);
          const double r = norm(off);
          Point v(x.size(), 0.0);
          if (r <= radius) return v;
          const double f = gain * (radius / r - 1.0);
          for (std::size_t c = 0; c < x.size(); ++c) v[c] = f * off[c];
          return v;
        },
        StepFunction(m), StepFunction(gain));
  };
  return spec;
}

GeneratorSpec interaction_family(double gain) {
  if (!(gain >= 0.0)) throw InvalidInput("interaction family: gain must be >= 0");
  GeneratorSpec spec;
  spec.name = "interaction";
  // |mean(mu)| <= M_1(mu) <= M_p(mu) and |mean(mu) - mean(nu)| <= W_p.
  spec.m = gain;
  spec.l = gain;
  spec.cap_l = gain;
  spec.generator = [gain](double, const DiscreteMeasure& mu) {
    const Point bar = mean(mu);
    return VelocityField::unchecked(
        mu.dim(),
        [bar, gain](double, const Point& x) {
          Point v(x.size());
          for (std::size_t c = 0; c < x.size(); ++c) v[c] = gain * (bar[c] - x[c]);
          return v;
        },
        StepFunction(gain), StepFunction(gain));
  };
  return spec;
}

SetValuedField make_field(std::size_t dim,
                          const std::vector<GeneratorSpec>& specs,
                          bool convexified, double p,
                          const ProbeOptions& probes) {
  std::vector<Generator> gens;
  double m = 0.0, l = 0.0, cap_l = 0.0;
  for (const auto& s : specs) {
    gens.push_back(s.generator);
    m = std::max(m, s.m);
    l = std::max(l, s.l);
    cap_l = std::max(cap_l, s.cap_l);
  }
  return SetValuedField(dim, std::move(gens), convexified, StepFunction(m),
                        StepFunction(l), StepFunction(cap_l), p, probes);
}

}  // namespace contincl

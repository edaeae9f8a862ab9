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

// Finitely supported probability measures on R^d and maps sampled on their
// supports.

#ifndef CONTINCL_MEASURE_HPP_
#define CONTINCL_MEASURE_HPP_

#include <cstddef>
#include <functional>
#include <vector>

#include "contincl/linalg.hpp"

namespace contincl {

// Weights are accepted when they sum to 1 within this tolerance...
inline constexpr double kWeightRenormalizeTol = 1e-9;
// ...and are rescaled whenever the sum is off by more than this.
inline constexpr double kWeightSumTol = 1e-12;

// sum_i w_i delta_{x_i}. Immutable after construction. Coincident atoms are
// kept as separate entries so that maps and plans can stay index-aligned;
// use canonicalize() to merge them when comparing measures.
class DiscreteMeasure {
 public:
  DiscreteMeasure(std::vector<Point> points, std::vector<double> weights);

  static DiscreteMeasure dirac(Point x);
  static DiscreteMeasure uniform(std::vector<Point> points);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<Point>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  const Point& point(std::size_t i) const { return points_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  // Bitwise equality of atoms and weights (same order).
  bool operator==(const DiscreteMeasure& other) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Point> points_;
  std::vector<double> weights_;
};

// A map xi in L^p(R^d, R^d; mu) restricted to supp(mu): one value per atom.
class SampledMap {
 public:
  SampledMap(DiscreteMeasure base, std::vector<Point> values);

  // xi = f(x_i) for every atom.
  static SampledMap from_function(const DiscreteMeasure& base,
                                  const std::function<Point(const Point&)>& f);
  static SampledMap zero(const DiscreteMeasure& base);
  static SampledMap identity(const DiscreteMeasure& base);

  const DiscreteMeasure& base() const { return base_; }
  const std::vector<Point>& values() const { return values_; }
  const Point& value(std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  SampledMap scaled(double s) const;

 private:
  DiscreteMeasure base_;
  std::vector<Point> values_;
};

// Throws InvalidInput unless xi was sampled on mu.
void require_same_base(const DiscreteMeasure& mu, const SampledMap& xi);

// f#mu with the same weights, atoms in the same order.
DiscreteMeasure pushforward(const DiscreteMeasure& mu, const SampledMap& f);
DiscreteMeasure pushforward(const DiscreteMeasure& mu,
                            const std::function<Point(const Point&)>& f);

// (Id + h xi)#mu.
DiscreteMeasure displace(const DiscreteMeasure& mu, const SampledMap& xi,
                         double h);

// M_p(mu) = (sum_i w_i |x_i|^p)^(1/p). Requires p > 1.
double moment_p(const DiscreteMeasure& mu, double p);

// ||xi||_{L^p(mu)}.
double lp_seminorm(const DiscreteMeasure& mu, const SampledMap& xi, double p);

// sum over atoms with |x_i| >= R of w_i |x_i|^p.
double tail_mass(const DiscreteMeasure& mu, double radius, double p);

// Sorts atoms lexicographically and merges points within `tol` (sup norm),
// summing their weights. Only used for equality tests.
DiscreteMeasure canonicalize(const DiscreteMeasure& mu, double tol = 0.0);

// True when the canonical forms agree atom by atom within `tol`.
bool approx_equal(const DiscreteMeasure& a, const DiscreteMeasure& b,
                  double tol);

// Barycenter sum_i w_i x_i.
Point mean(const DiscreteMeasure& mu);

void require_p(double p);

}  // namespace contincl

#endif  // CONTINCL_MEASURE_HPP_

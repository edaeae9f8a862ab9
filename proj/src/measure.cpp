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

#include "contincl/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "contincl/errors.hpp"

namespace contincl {

void require_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw InvalidInput("exponent p must lie in (1, inf), got " +
                       std::to_string(p));
  }
}

DiscreteMeasure::DiscreteMeasure(std::vector<Point> points,
                                 std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.empty()) throw InvalidInput("DiscreteMeasure: no atoms");
  if (points_.size() != weights_.size()) {
    throw InvalidInput("DiscreteMeasure: points/weights length mismatch");
  }
  dim_ = points_.front().size();
  if (dim_ == 0) throw InvalidInput("DiscreteMeasure: zero dimension");
  for (const Point& x : points_) {
    if (x.size() != dim_) {
      throw InvalidInput("DiscreteMeasure: inconsistent point dimensions");
    }
    if (!all_finite(x)) throw InvalidInput("DiscreteMeasure: non-finite point");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw InvalidInput("DiscreteMeasure: weights must be strictly positive");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > kWeightRenormalizeTol) {
    throw InvalidInput("DiscreteMeasure: weights sum to " +
                       std::to_string(total) + ", expected 1");
  }
  if (std::abs(total - 1.0) > kWeightSumTol) {
    for (double& w : weights_) w /= total;
  }
}

DiscreteMeasure DiscreteMeasure::dirac(Point x) {
  return DiscreteMeasure({std::move(x)}, {1.0});
}

DiscreteMeasure DiscreteMeasure::uniform(std::vector<Point> points) {
  const std::size_t n = points.size();
  if (n == 0) throw InvalidInput("DiscreteMeasure::uniform: no atoms");
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  return DiscreteMeasure(std::move(points), std::move(w));
}

SampledMap::SampledMap(DiscreteMeasure base, std::vector<Point> values)
    : base_(std::move(base)), values_(std::move(values)) {
  if (values_.size() != base_.size()) {
    throw InvalidInput("SampledMap: need one value per atom");
  }
  for (const Point& v : values_) {
    if (!all_finite(v)) throw InvalidInput("SampledMap: non-finite value");
  }
}

SampledMap SampledMap::from_function(
    const DiscreteMeasure& base, const std::function<Point(const Point&)>& f) {
  std::vector<Point> vals;
  vals.reserve(base.size());
  for (const Point& x : base.points()) vals.push_back(f(x));
  return SampledMap(base, std::move(vals));
}

SampledMap SampledMap::zero(const DiscreteMeasure& base) {
  return SampledMap(base,
                    std::vector<Point>(base.size(), Point(base.dim(), 0.0)));
}

SampledMap SampledMap::identity(const DiscreteMeasure& base) {
  return SampledMap(base, base.points());
}

SampledMap SampledMap::scaled(double s) const {
  std::vector<Point> vals = values_;
  for (Point& v : vals) {
    for (double& c : v) c *= s;
  }
  return SampledMap(base_, std::move(vals));
}

void require_same_base(const DiscreteMeasure& mu, const SampledMap& xi) {
  if (!(xi.base() == mu)) {
    throw InvalidInput("sampled map is not defined on this measure");
  }
}

DiscreteMeasure pushforward(const DiscreteMeasure& mu, const SampledMap& f) {
  require_same_base(mu, f);
  for (const Point& v : f.values()) {
    if (v.size() != mu.dim()) {
      throw InvalidInput("pushforward: map output dimension mismatch");
    }
  }
  return DiscreteMeasure(f.values(), mu.weights());
}

DiscreteMeasure pushforward(const DiscreteMeasure& mu,
                            const std::function<Point(const Point&)>& f) {
  std::vector<Point> images;
  images.reserve(mu.size());
  for (const Point& x : mu.points()) {
    Point y = f(x);
    if (y.size() != mu.dim()) {
      throw InvalidInput("pushforward: map output dimension mismatch");
    }
    images.push_back(std::move(y));
  }
  return DiscreteMeasure(std::move(images), mu.weights());
}

DiscreteMeasure displace(const DiscreteMeasure& mu, const SampledMap& xi,
                         double h) {
  require_same_base(mu, xi);
  std::vector<Point> pts;
  pts.reserve(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (xi.value(i).size() != mu.dim()) {
      throw InvalidInput("displace: direction dimension mismatch");
    }
    pts.push_back(axpy(mu.point(i), h, xi.value(i)));
  }
  return DiscreteMeasure(std::move(pts), mu.weights());
}

double moment_p(const DiscreteMeasure& mu, double p) {
  require_p(p);
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    s += mu.weight(i) * std::pow(norm(mu.point(i)), p);
  }
  return std::pow(s, 1.0 / p);
}

double lp_seminorm(const DiscreteMeasure& mu, const SampledMap& xi, double p) {
  require_p(p);
  require_same_base(mu, xi);
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    s += mu.weight(i) * std::pow(norm(xi.value(i)), p);
  }
  return std::pow(s, 1.0 / p);
}

double tail_mass(const DiscreteMeasure& mu, double radius, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double r = norm(mu.point(i));
    if (r >= radius) s += mu.weight(i) * std::pow(r, p);
  }
  return s;
}

DiscreteMeasure canonicalize(const DiscreteMeasure& mu, double tol) {
  std::vector<std::size_t> order(mu.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return mu.point(a) < mu.point(b);
  });
  std::vector<Point> pts;
  std::vector<double> ws;
  for (std::size_t idx : order) {
    const Point& x = mu.point(idx);
    bool merged = false;
    // Lexicographic order keeps near-equal points adjacent except when a
    // leading coordinate differs by less than tol; a short backward scan
    // handles that case at desk scale.
    for (std::size_t k = pts.size(); k-- > 0;) {
      if (x[0] - pts[k][0] > tol) break;
      bool close = true;
      for (std::size_t c = 0; c < x.size(); ++c) {
        if (std::abs(x[c] - pts[k][c]) > tol) {
          close = false;
          break;
        }
      }
      if (close) {
        ws[k] += mu.weight(idx);
        merged = true;
        break;
      }
    }
    if (!merged) {
      pts.push_back(x);
      ws.push_back(mu.weight(idx));
    }
  }
  return DiscreteMeasure(std::move(pts), std::move(ws));
}

bool approx_equal(const DiscreteMeasure& a, const DiscreteMeasure& b,
                  double tol) {
  if (a.dim() != b.dim()) return false;
  const DiscreteMeasure ca = canonicalize(a, tol);
  const DiscreteMeasure cb = canonicalize(b, tol);
  if (ca.size() != cb.size()) return false;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (std::abs(ca.weight(i) - cb.weight(i)) > tol) return false;
    for (std::size_t c = 0; c < ca.dim(); ++c) {
      if (std::abs(ca.point(i)[c] - cb.point(i)[c]) > tol) return false;
    }
  }
  return true;
}

Point mean(const DiscreteMeasure& mu) {
  Point m(mu.dim(), 0.0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t c = 0; c < mu.dim(); ++c) {
      m[c] += mu.weight(i) * mu.point(i)[c];
    }
  }
  return m;
}

}  // namespace contincl

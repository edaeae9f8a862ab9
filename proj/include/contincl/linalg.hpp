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

// Small dense vector helpers on std::vector<double>. Dimensions at desk
// scale are 1 to 4, so nothing here is vectorized.

#ifndef CONTINCL_LINALG_HPP_
#define CONTINCL_LINALG_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace contincl {

using Point = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline Point add(std::span<const double> a, std::span<const double> b) {
  Point r(a.begin(), a.end());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

inline Point sub(std::span<const double> a, std::span<const double> b) {
  Point r(a.begin(), a.end());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

inline Point scale(std::span<const double> a, double s) {
  Point r(a.begin(), a.end());
  for (double& x : r) x *= s;
  return r;
}

// a + s * b
inline Point axpy(std::span<const double> a, double s,
                  std::span<const double> b) {
  Point r(a.begin(), a.end());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += s * b[i];
  return r;
}

inline bool all_finite(std::span<const double> a) {
  for (double x : a) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace contincl

#endif  // CONTINCL_LINALG_HPP_

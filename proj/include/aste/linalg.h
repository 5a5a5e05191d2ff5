// Copyright 2026 The ASTE Toolkit Authors.
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

#ifndef ASTE_LINALG_H_
#define ASTE_LINALG_H_

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace aste {

using Vector = std::vector<double>;
// One row per token.
using TokenMatrix = std::vector<Vector>;

inline double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double L2Norm(std::span<const double> a) { return std::sqrt(Dot(a, a)); }

// Arithmetic mean of rows [first, last] of `m`.
inline Vector MeanPool(const TokenMatrix& m, size_t first, size_t last) {
  Vector out(m.at(first).size(), 0.0);
  for (size_t r = first; r <= last; ++r) {
    for (size_t c = 0; c < out.size(); ++c) out[c] += m[r][c];
  }
  const double n = static_cast<double>(last - first + 1);
  for (double& v : out) v /= n;
  return out;
}

}  // namespace aste

#endif  // ASTE_LINALG_H_

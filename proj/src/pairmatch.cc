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

#include "aste/pairmatch.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fmt/format.h"

namespace aste {
namespace {

constexpr double kTieEpsilon = 1e-9;

// Maximum-weight assignment on a square matrix via the shortest augmenting
// path formulation of the Hungarian algorithm. Returns row -> column.
std::vector<size_t> MaxAssignment(const std::vector<std::vector<double>>& w) {
  const size_t n = w.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), min_v(n + 1);
  std::vector<size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<bool> used(n + 1);
  for (size_t row = 1; row <= n; ++row) {
    match[0] = row;
    size_t col0 = 0;
    std::fill(min_v.begin(), min_v.end(), inf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[col0] = true;
      const size_t row0 = match[col0];
      double delta = inf;
      size_t col1 = 0;
      for (size_t col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const double cur = -w[row0 - 1][col - 1] - u[row0] - v[col];
        if (cur < min_v[col]) {
          min_v[col] = cur;
          way[col] = col0;
        }
        if (min_v[col] < delta) {
          delta = min_v[col];
          col1 = col;
        }
      }
      for (size_t col = 0; col <= n; ++col) {
        if (used[col]) {
          u[match[col]] += delta;
          v[col] -= delta;
        } else {
          min_v[col] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const size_t col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<size_t> assignment(n);
  for (size_t col = 1; col <= n; ++col) assignment[match[col] - 1] = col - 1;
  return assignment;
}

// Best matching value over the allowed edges. Disallowed edges become zero
// entries in a padded square matrix, which is equivalent to leaving the
// endpoints unmatched since all weights are non-negative.
double BestValue(const std::vector<std::vector<double>>& weights,
                 const std::vector<std::vector<bool>>& allowed) {
  const size_t rows = weights.size();
  const size_t cols = rows == 0 ? 0 : weights[0].size();
  const size_t n = std::max(rows, cols);
  if (n == 0) return 0.0;
  std::vector<std::vector<double>> square(n, std::vector<double>(n, 0.0));
  for (size_t a = 0; a < rows; ++a) {
    for (size_t o = 0; o < cols; ++o) {
      if (allowed[a][o]) square[a][o] = weights[a][o];
    }
  }
  const std::vector<size_t> assignment = MaxAssignment(square);
  double total = 0.0;
  for (size_t r = 0; r < n; ++r) total += square[r][assignment[r]];
  return total;
}

std::vector<std::vector<bool>> AllowedEdges(
    const std::vector<std::vector<double>>& weights, double threshold) {
  std::vector<std::vector<bool>> allowed;
  for (const auto& row : weights) {
    std::vector<bool> r(row.size());
    for (size_t o = 0; o < row.size(); ++o) r[o] = row[o] >= threshold;
    allowed.push_back(std::move(r));
  }
  return allowed;
}

std::vector<MatchedPair> MatchOneToOne(
    const std::vector<std::vector<double>>& weights, double threshold) {
  const size_t rows = weights.size();
  if (rows == 0 || weights[0].empty()) return {};
  const size_t cols = weights[0].size();
  std::vector<std::vector<bool>> allowed = AllowedEdges(weights, threshold);
  double remaining = BestValue(weights, allowed);
  std::vector<MatchedPair> out;
  // Fix aspects in index order, each to the lowest opinion that still admits
  // an optimal completion.
  for (size_t a = 0; a < rows; ++a) {
    bool fixed = false;
    for (size_t o = 0; o < cols && !fixed; ++o) {
      if (!allowed[a][o]) continue;
      auto trial = allowed;
      for (size_t c = 0; c < cols; ++c) trial[a][c] = false;
      for (size_t r = 0; r < rows; ++r) trial[r][o] = false;
      const double rest = BestValue(weights, trial);
      if (weights[a][o] + rest >= remaining - kTieEpsilon) {
        out.emplace_back(a, o);
        allowed = std::move(trial);
        remaining = rest;
        fixed = true;
      }
    }
    if (!fixed) {
      for (size_t c = 0; c < cols; ++c) allowed[a][c] = false;
    }
  }
  return out;
}

std::vector<MatchedPair> MatchOneToMany(
    const std::vector<std::vector<double>>& weights, double threshold) {
  std::vector<MatchedPair> out;
  if (weights.empty()) return out;
  for (size_t o = 0; o < weights[0].size(); ++o) {
    size_t best = 0;
    for (size_t a = 1; a < weights.size(); ++a) {
      if (weights[a][o] > weights[best][o]) best = a;
    }
    if (weights[best][o] >= threshold) out.emplace_back(best, o);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string_view CardinalityName(Cardinality c) {
  return c == Cardinality::kOneToOne ? "one_to_one" : "one_to_many";
}

absl::StatusOr<Cardinality> ParseCardinality(std::string_view name) {
  if (name == "one_to_one") return Cardinality::kOneToOne;
  if (name == "one_to_many") return Cardinality::kOneToMany;
  return absl::InvalidArgumentError(fmt::format(
      "unknown cardinality '{}' (expected one_to_one or one_to_many)", name));
}

absl::Status MatchPolicy::Validate() const {
  auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!in_unit(threshold)) {
    return absl::InvalidArgumentError("match threshold must be in [0, 1]");
  }
  if (!in_unit(alpha) || !in_unit(beta)) {
    return absl::InvalidArgumentError("alpha and beta must be in [0, 1]");
  }
  if (std::abs(alpha + beta - 1.0) > 1e-9) {
    return absl::InvalidArgumentError(
        fmt::format("alpha + beta must equal 1 (got {} + {})", alpha, beta));
  }
  if (!(proximity_scale >= 1.0)) {
    return absl::InvalidArgumentError("proximity_scale must be >= 1");
  }
  return absl::OkStatus();
}

absl::Status PairGraph::Validate() const {
  if (weights.size() != aspects.size()) {
    return absl::InvalidArgumentError("weight rows do not match aspects");
  }
  for (const auto& row : weights) {
    if (row.size() != opinions.size()) {
      return absl::InvalidArgumentError("weight columns do not match opinions");
    }
    for (double w : row) {
      if (!(w >= 0.0 && w <= 1.0)) {
        return absl::InvalidArgumentError("edge weight outside [0, 1]");
      }
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<double> Cosine(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) {
    return absl::InvalidArgumentError(fmt::format(
        "cosine of vectors with dimensions {} and {}", u.size(), v.size()));
  }
  const double nu = L2Norm(u);
  const double nv = L2Norm(v);
  if (nu == 0.0 || nv == 0.0) {
    return absl::InvalidArgumentError("cosine of a zero vector");
  }
  return std::clamp(Dot(u, v) / (nu * nv), -1.0, 1.0);
}

size_t TokenGap(const TokenInterval& a, const TokenInterval& b) {
  if (a.last < b.first) return b.first - a.last - 1;
  if (b.last < a.first) return a.first - b.last - 1;
  return 0;
}

double EdgeWeight(double cosine, size_t gap, const MatchPolicy& policy) {
  const double w = policy.alpha * ((cosine + 1.0) / 2.0) +
                   policy.beta * std::exp(-static_cast<double>(gap) /
                                          policy.proximity_scale);
  return std::clamp(w, 0.0, 1.0);
}

absl::StatusOr<PairGraph> BuildPairGraph(
    std::vector<CandidateSpan> aspects, std::vector<CandidateSpan> opinions,
    const std::vector<Vector>& aspect_vectors,
    const std::vector<Vector>& opinion_vectors, const MatchPolicy& policy) {
  if (auto s = policy.Validate(); !s.ok()) return s;
  if (aspect_vectors.size() != aspects.size() ||
      opinion_vectors.size() != opinions.size()) {
    return absl::InvalidArgumentError(
        "need exactly one embedding per candidate span");
  }
  PairGraph graph;
  graph.weights.assign(aspects.size(),
                       std::vector<double>(opinions.size(), 0.0));
  for (size_t a = 0; a < aspects.size(); ++a) {
    for (size_t o = 0; o < opinions.size(); ++o) {
      auto cos = Cosine(aspect_vectors[a], opinion_vectors[o]);
      if (!cos.ok()) {
        return absl::Status(cos.status().code(),
                            fmt::format("aspect {} / opinion {}: {}", a, o,
                                        std::string(cos.status().message())));
      }
      graph.weights[a][o] =
          EdgeWeight(*cos, TokenGap(aspects[a].span, opinions[o].span), policy);
    }
  }
  graph.aspects = std::move(aspects);
  graph.opinions = std::move(opinions);
  return graph;
}

double MaxMatchingWeight(const std::vector<std::vector<double>>& weights,
                         double threshold) {
  return BestValue(weights, AllowedEdges(weights, threshold));
}

std::vector<MatchedPair> MatchPairs(const PairGraph& graph,
                                    const MatchPolicy& policy) {
  if (policy.cardinality == Cardinality::kOneToMany) {
    return MatchOneToMany(graph.weights, policy.threshold);
  }
  return MatchOneToOne(graph.weights, policy.threshold);
}

}  // namespace aste

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

#ifndef ASTE_PAIRMATCH_H_
#define ASTE_PAIRMATCH_H_

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "aste/linalg.h"
#include "aste/spanex.h"

namespace aste {

enum class Cardinality { kOneToOne, kOneToMany };

std::string_view CardinalityName(Cardinality c);
absl::StatusOr<Cardinality> ParseCardinality(std::string_view name);

struct MatchPolicy {
  double threshold = 0.4;
  Cardinality cardinality = Cardinality::kOneToOne;
  double alpha = 0.7;
  double beta = 0.3;
  double proximity_scale = 5.0;  // d0, in tokens

  absl::Status Validate() const;
};

struct PairGraph {
  std::vector<CandidateSpan> aspects;
  std::vector<CandidateSpan> opinions;
  std::vector<std::vector<double>> weights;  // [aspect][opinion]

  absl::Status Validate() const;
};

using MatchedPair = std::pair<size_t, size_t>;  // (aspect, opinion)

absl::StatusOr<double> Cosine(const Vector& u, const Vector& v);

// Tokens strictly between the two spans; 0 when adjacent or overlapping.
size_t TokenGap(const TokenInterval& a, const TokenInterval& b);

// alpha * (cosine + 1) / 2 + beta * exp(-gap / d0), clamped to [0, 1].
double EdgeWeight(double cosine, size_t gap, const MatchPolicy& policy);

// `aspect_vectors[i]` is the pooled embedding of `aspects[i]`, likewise for
// opinions.
absl::StatusOr<PairGraph> BuildPairGraph(
    std::vector<CandidateSpan> aspects, std::vector<CandidateSpan> opinions,
    const std::vector<Vector>& aspect_vectors,
    const std::vector<Vector>& opinion_vectors, const MatchPolicy& policy);

// Maximum total weight of a matching restricted to edges with
// weight >= threshold. Exact (Hungarian algorithm).
double MaxMatchingWeight(const std::vector<std::vector<double>>& weights,
                         double threshold);

// one_to_one: a maximum-weight matching over edges >= threshold. Among
// optimal matchings, aspect 0 takes the lowest-indexed opinion it can, then
// aspect 1, and so on (unmatched ranks after every opinion).
// one_to_many: each opinion attaches to its best aspect (lowest index on
// ties) when that edge clears the threshold.
// Output is sorted by (aspect, opinion).
std::vector<MatchedPair> MatchPairs(const PairGraph& graph,
                                    const MatchPolicy& policy);

}  // namespace aste

#endif  // ASTE_PAIRMATCH_H_

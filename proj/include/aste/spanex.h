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

#ifndef ASTE_SPANEX_H_
#define ASTE_SPANEX_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "aste/corpus.h"
#include "aste/linalg.h"
#include "aste/textnorm.h"
#include "json.hpp"

namespace aste {

// Inclusive token interval [first, last].
struct TokenInterval {
  size_t first = 0;
  size_t last = 0;

  size_t length() const { return last - first + 1; }
  bool Overlaps(const TokenInterval& o) const {
    return first <= o.last && o.first <= last;
  }
  friend bool operator==(const TokenInterval&, const TokenInterval&) = default;
  friend auto operator<=>(const TokenInterval&, const TokenInterval&) = default;
};

struct CandidateSpan {
  TokenInterval span;
  double aspect_score = 0.0;
  double opinion_score = 0.0;

  double score(SpanRole role) const {
    return role == SpanRole::kAspect ? aspect_score : opinion_score;
  }
  friend bool operator==(const CandidateSpan&, const CandidateSpan&) = default;
};

// All intervals of width 1..max_len over n tokens, in lexicographic order.
std::vector<TokenInterval> EnumerateSpans(size_t n, size_t max_len);

// Number of intervals EnumerateSpans returns.
size_t SpanCount(size_t n, size_t max_len);

// Removes intervals that start or end on a stopword-flagged token.
std::vector<TokenInterval> DropStopwordEdges(
    const TokenizedText& text, const std::vector<TokenInterval>& spans);

// Terms from a seed lexicon, normalized the same way review text is. A term
// may span several tokens.
class TermLexicon {
 public:
  TermLexicon() = default;
  explicit TermLexicon(const std::vector<std::string>& terms);

  // One term per line; blank lines and '#' comments are skipped.
  static absl::StatusOr<TermLexicon> Parse(std::string_view content);
  static absl::StatusOr<TermLexicon> Load(const std::string& path);

  bool Contains(const std::u32string& term) const {
    return terms_.count(term) > 0;
  }
  bool empty() const { return terms_.empty(); }
  std::vector<std::string> Terms() const;

 private:
  std::set<std::u32string> terms_;
};

// Per-review input to a scorer. Token vectors are present when an embedding
// backend is configured.
struct ScoringInput {
  const TokenizedText* text = nullptr;
  const TokenMatrix* token_vectors = nullptr;
};

class SpanScorer {
 public:
  virtual ~SpanScorer() = default;

  // Returns (aspect_score, opinion_score), both in [0, 1]. Deterministic for
  // fixed scorer state.
  virtual absl::StatusOr<std::pair<double, double>> Score(
      const ScoringInput& input, TokenInterval span) const = 0;

  virtual nlohmann::json ToJson() const = 0;
};

class ConstantSpanScorer : public SpanScorer {
 public:
  ConstantSpanScorer(double aspect, double opinion)
      : aspect_(aspect), opinion_(opinion) {}

  absl::StatusOr<std::pair<double, double>> Score(
      const ScoringInput& input, TokenInterval span) const override;
  nlohmann::json ToJson() const override;

 private:
  double aspect_;
  double opinion_;
};

// Scores 1.0 for a role when the span text is in that role's seed lexicon, or
// when its head (last) token is and no sub-span is a term of the other role;
// else 0.0.
class LexiconSpanScorer : public SpanScorer {
 public:
  LexiconSpanScorer(TermLexicon aspects, TermLexicon opinions)
      : aspects_(std::move(aspects)), opinions_(std::move(opinions)) {}

  absl::StatusOr<std::pair<double, double>> Score(
      const ScoringInput& input, TokenInterval span) const override;
  nlohmann::json ToJson() const override;

 private:
  TermLexicon aspects_;
  TermLexicon opinions_;
};

// Sparse feature vector: (bucket, value) pairs sorted by bucket, with
// duplicate buckets summed. Dense embedding features, when used, occupy
// buckets [2^hash_bits, 2^hash_bits + dim).
using SparseFeatures = std::vector<std::pair<uint32_t, double>>;

struct LogisticScorerConfig {
  int hash_bits = 18;
  uint64_t seed = 42;
  int epochs = 12;
  double learning_rate = 0.2;
  double l2 = 1e-6;
  // Weight positives by (#negatives / #positives) so rare spans are not
  // swamped by the enumerated negatives.
  bool balance_classes = true;
  // Adds the mean-pooled span embedding as dense features.
  bool use_embeddings = false;
};

// One training span: its features come from the review text and it is a
// positive example for each role it carries in gold.
struct SpanExample {
  const TokenizedText* text = nullptr;
  const TokenMatrix* token_vectors = nullptr;
  TokenInterval span;
  bool is_aspect = false;
  bool is_opinion = false;
};

// Two independent logistic regressions (aspect, opinion) over hashed
// character n-gram, token, context and seed lexicon features.
class LogisticSpanScorer : public SpanScorer {
 public:
  struct RoleModel {
    double bias = 0.0;
    std::vector<double> weights;  // dense over all buckets
  };

  static absl::StatusOr<LogisticSpanScorer> Train(
      const std::vector<SpanExample>& examples, TermLexicon aspects,
      TermLexicon opinions, const LogisticScorerConfig& config);

  static absl::StatusOr<LogisticSpanScorer> FromJson(const nlohmann::json& j);

  absl::StatusOr<std::pair<double, double>> Score(
      const ScoringInput& input, TokenInterval span) const override;
  nlohmann::json ToJson() const override;

  SparseFeatures Features(const ScoringInput& input, TokenInterval span) const;
  const RoleModel& model(SpanRole role) const {
    return role == SpanRole::kAspect ? aspect_ : opinion_;
  }
  const LogisticScorerConfig& config() const { return config_; }
  size_t embedding_dim() const { return embedding_dim_; }

 private:
  LogisticSpanScorer(LogisticScorerConfig config, TermLexicon aspects,
                     TermLexicon opinions, size_t embedding_dim);

  size_t num_features() const {
    return (size_t{1} << config_.hash_bits) + embedding_dim_;
  }

  LogisticScorerConfig config_;
  TermLexicon aspects_;
  TermLexicon opinions_;
  size_t embedding_dim_ = 0;
  RoleModel aspect_;
  RoleModel opinion_;
};

// Restores any scorer written by SpanScorer::ToJson.
absl::StatusOr<std::unique_ptr<SpanScorer>> SpanScorerFromJson(
    const nlohmann::json& j);

// One CandidateSpan per interval, order preserved.
absl::StatusOr<std::vector<CandidateSpan>> ScoreSpans(
    const ScoringInput& input, const std::vector<TokenInterval>& spans,
    const SpanScorer& scorer);

// Keeps candidates whose `role` score is >= threshold, suppresses overlaps
// greedily (higher score wins; ties go to the earlier start, then the
// shorter span), keeps at most top_k, and returns them sorted by start.
std::vector<CandidateSpan> Prune(const std::vector<CandidateSpan>& candidates,
                                 SpanRole role, double threshold, size_t top_k);

}  // namespace aste

#endif  // ASTE_SPANEX_H_

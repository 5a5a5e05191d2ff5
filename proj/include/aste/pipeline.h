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

#ifndef ASTE_PIPELINE_H_
#define ASTE_PIPELINE_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "aste/config.h"
#include "aste/corpus.h"
#include "aste/embedding.h"
#include "aste/evalkit.h"
#include "aste/polarity.h"
#include "aste/spanex.h"
#include "aste/textnorm.h"
#include "json.hpp"

namespace aste {

// Text resources referenced by the config. Missing paths give empty
// resources.
struct PipelineResources {
  SpellingLexicon spelling;
  StopwordSet stopwords;
  TermLexicon aspects;
  TermLexicon opinions;

  static absl::StatusOr<PipelineResources> Load(
      const PipelineConfig::Paths& paths);
  nlohmann::ordered_json ToJson() const;
  static absl::StatusOr<PipelineResources> FromJson(const nlohmann::json& j);
};

// Hashed backends are rebuilt from (dim, seed); precomputed ones load
// paths.embedding_store.
absl::StatusOr<std::shared_ptr<const EmbeddingBackend>> MakeBackend(
    const PipelineConfig& config);

// Token interval covering every token whose raw extent overlaps `raw`;
// nullopt when no token does.
std::optional<TokenInterval> CoveringTokens(const TokenizedText& text,
                                            Span raw);

// Raw span produced by tokens [span.first, span.last].
absl::StatusOr<Span> RawSpan(const TokenizedText& text, TokenInterval span);

struct ExtractedTriplet {
  Triplet triplet;  // raw-text offsets
  std::string aspect_text;
  std::string opinion_text;
  double aspect_score = 0.0;
  double opinion_score = 0.0;
  double edge_weight = 0.0;
  Distribution distribution{};
  // min(aspect_score, opinion_score) * max(distribution).
  double confidence = 0.0;
};

nlohmann::ordered_json ExtractedTripletToJson(const ExtractedTriplet& t);

struct TrainingStats {
  size_t reviews = 0;
  size_t gold_triplets = 0;
  size_t unaligned_triplets = 0;  // gold spans covering no token
  size_t unreachable_spans = 0;   // gold spans the enumerator cannot emit
  size_t spans_enumerated = 0;
  size_t aspect_candidates_kept = 0;
  size_t opinion_candidates_kept = 0;
  size_t pairs_matched = 0;
  size_t polarity_examples = 0;
  PolarityTrainingReport polarity;

  nlohmann::ordered_json ToJson() const;
};

class PipelineModel {
 public:
  static absl::StatusOr<PipelineModel> Train(
      const Corpus& corpus, const PipelineConfig& config,
      PipelineResources resources,
      std::shared_ptr<const EmbeddingBackend> backend,
      TrainingStats* stats = nullptr);

  static absl::StatusOr<PipelineModel> FromParts(
      PipelineConfig config, PipelineResources resources,
      std::shared_ptr<const EmbeddingBackend> backend,
      std::unique_ptr<SpanScorer> scorer,
      std::unique_ptr<PolarityModel> polarity);

  // Triplets for one review, ordered by (aspect, opinion). Offsets index the
  // review's raw text.
  absl::StatusOr<std::vector<ExtractedTriplet>> Extract(
      const Review& review) const;

  // Extract over a corpus, keeping only the triplets.
  absl::StatusOr<std::vector<std::vector<Triplet>>> Predict(
      const Corpus& corpus) const;

  const PipelineConfig& config() const { return config_; }
  const PipelineResources& resources() const { return resources_; }
  const EmbeddingBackend& backend() const { return *backend_; }
  const SpanScorer& scorer() const { return *scorer_; }
  const PolarityModel& polarity() const { return *polarity_; }

 private:
  PipelineModel() = default;

  TokenizedText Preprocess(const Review& review) const;

  PipelineConfig config_;
  PipelineResources resources_;
  std::shared_ptr<const EmbeddingBackend> backend_;
  std::unique_ptr<SpanScorer> scorer_;
  std::unique_ptr<PolarityModel> polarity_;
};

// Candidate spans surviving pruning for both roles after cross-role overlap
// resolution: where an aspect and an opinion candidate overlap, the one with
// the lower own-role score is dropped (the aspect wins ties).
struct RoleCandidates {
  std::vector<CandidateSpan> aspects;
  std::vector<CandidateSpan> opinions;
};
RoleCandidates ResolveRoles(std::vector<CandidateSpan> aspects,
                            std::vector<CandidateSpan> opinions);

// Scores `model` on an adjudicated corpus; the report carries the model's
// config digest and seed.
absl::StatusOr<MetricsReport> EvaluateModel(const PipelineModel& model,
                                            const Corpus& corpus,
                                            MatchCriterion criterion);

// k-fold cross-validation that trains a fresh pipeline per fold, using
// config.eval for k and the match criterion.
absl::StatusOr<MetricsReport> CrossValidatePipeline(
    const Corpus& corpus, const PipelineConfig& config,
    const PipelineResources& resources,
    std::shared_ptr<const EmbeddingBackend> backend);

}  // namespace aste

#endif  // ASTE_PIPELINE_H_

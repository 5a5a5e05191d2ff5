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

#ifndef ASTE_CONFIG_H_
#define ASTE_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "aste/evalkit.h"
#include "aste/ingest.h"
#include "aste/pairmatch.h"
#include "aste/polarity.h"
#include "aste/spanex.h"
#include "json.hpp"

namespace aste {

enum class ScorerKind { kLogistic, kLexicon, kEncoder };
enum class BackendKind { kHashed, kPrecomputed };

std::string_view ScorerKindName(ScorerKind kind);
std::string_view BackendKindName(BackendKind kind);

// Every tunable of the pipeline. The JSON form mirrors the struct:
// {"seed", "paths": {...}, "ingest": {...}, "spanex": {...},
//  "pairmatch": {...}, "polarity": {...}, "eval": {...}}.
struct PipelineConfig {
  struct Paths {
    std::string corpus;
    std::string aspect_lexicon;
    std::string opinion_lexicon;
    std::string stopwords;
    std::string spelling_lexicon;
    std::string embedding_store;
    std::string model_bundle = "aste_bundle";
  };
  struct Ingest {
    FilterPolicy filter;
    ColumnMap columns;
  };
  struct Spanex {
    size_t max_span_len = 4;
    double threshold = 0.5;
    size_t top_k = 10;
    ScorerKind scorer = ScorerKind::kLogistic;
    int hash_bits = 18;
    int epochs = 12;
    double learning_rate = 0.2;
    double l2 = 1e-6;
    bool balance_classes = true;
  };
  struct Polarity {
    BackendKind backend = BackendKind::kHashed;
    size_t dim = 64;
    PolarityConfig model;
  };
  struct Eval {
    int k = 5;
    MatchCriterion match = MatchCriterion::kExact;
  };

  uint64_t seed = 42;
  Paths paths;
  Ingest ingest;
  Spanex spanex;
  MatchPolicy pairmatch;
  Polarity polarity;
  Eval eval;

  absl::Status Validate() const;
};

// Defaults as a JSON tree; also the schema for unknown-key checks.
nlohmann::ordered_json DefaultConfigJson();

nlohmann::ordered_json ConfigToJson(const PipelineConfig& config);

// Merges `j` over the defaults. Unknown keys, type mismatches and invalid
// values are errors that name the offending key path.
absl::StatusOr<PipelineConfig> ConfigFromJson(const nlohmann::json& j);

// Applies "dotted.key=value" overrides to a config tree. The value is read as
// JSON when it parses, otherwise as a string.
absl::Status ApplyOverrides(nlohmann::ordered_json& tree,
                            const std::vector<std::string>& overrides);

// Loads `path` (empty = defaults), then applies `overrides`.
absl::StatusOr<PipelineConfig> LoadConfig(
    const std::string& path, const std::vector<std::string>& overrides);

// SHA-256 over the canonical JSON of everything except `paths`, so moving
// files around does not change the digest.
std::string ConfigDigest(const PipelineConfig& config);

}  // namespace aste

#endif  // ASTE_CONFIG_H_

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

#ifndef ASTE_BUNDLE_H_
#define ASTE_BUNDLE_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "aste/config.h"
#include "aste/pipeline.h"
#include "json.hpp"

namespace aste {

inline constexpr int kBundleSchemaVersion = 1;
inline constexpr std::string_view kBundleFormat = "aste-bundle";

// Directory layout:
//   manifest.json        schema version, digests, label order, feature layout
//   config.json          full pipeline config
//   span_scorer.json     span scorer state
//   polarity_model.json  polarity classifier
//   resources.json       lexicons and stopwords used at training time
struct BundleManifest {
  int schema_version = kBundleSchemaVersion;
  std::string config_digest;
  std::string corpus_digest;  // SHA-256 of the serialized training corpus
  std::vector<std::string> label_order;
  std::vector<std::string> feature_layout;
  nlohmann::json embedding;
  nlohmann::ordered_json training;
  // SHA-256 of each component file, keyed by file name.
  std::map<std::string, std::string> files;

  nlohmann::ordered_json ToJson() const;
  static absl::StatusOr<BundleManifest> FromJson(const nlohmann::json& j);
};

std::string CorpusDigest(const Corpus& corpus);

absl::Status SaveBundle(const PipelineModel& model, const std::string& dir,
                        const std::string& corpus_digest,
                        const TrainingStats& stats);

struct LoadedBundle {
  BundleManifest manifest;
  PipelineModel model;
};

// Verifies the schema version, every component checksum and the config
// digest. `paths` replaces the stored file paths (used to locate a
// precomputed embedding store); paths never enter the digest.
absl::StatusOr<LoadedBundle> LoadBundle(
    const std::string& dir,
    const std::optional<PipelineConfig::Paths>& paths = std::nullopt);

// FailedPrecondition when `config` does not hash to the bundle's digest.
absl::Status CheckConfigDigest(const BundleManifest& manifest,
                               const PipelineConfig& config);

}  // namespace aste

#endif  // ASTE_BUNDLE_H_

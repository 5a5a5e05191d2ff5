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

#include "aste/bundle.h"

#include <filesystem>
#include <system_error>

#include "aste/embedding.h"
#include "aste/file_util.h"
#include "aste/hashing.h"
#include "aste/status_macros.h"
#include "fmt/format.h"

namespace aste {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

constexpr const char* kManifestFile = "manifest.json";
constexpr const char* kConfigFile = "config.json";
constexpr const char* kScorerFile = "span_scorer.json";
constexpr const char* kPolarityFile = "polarity_model.json";
constexpr const char* kResourcesFile = "resources.json";

std::string PathIn(const std::string& dir, const char* name) {
  return (std::filesystem::path(dir) / name).string();
}

absl::StatusOr<json> ParseComponent(const std::string& path,
                                    const std::string& content) {
  json j = json::parse(content, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    return absl::InvalidArgumentError(
        fmt::format("bundle file '{}' is not valid JSON", path));
  }
  return j;
}

absl::Status InFile(const absl::Status& status, const std::string& path) {
  return absl::Status(
      status.code(),
      fmt::format("bundle file '{}': {}", path, std::string(status.message())));
}

}  // namespace

ojson BundleManifest::ToJson() const {
  ojson j;
  j["format"] = kBundleFormat;
  j["schema_version"] = schema_version;
  j["config_digest"] = config_digest;
  j["corpus_digest"] = corpus_digest;
  j["label_order"] = label_order;
  j["feature_layout"] = feature_layout;
  j["embedding"] = embedding;
  j["training"] = training;
  j["files"] = files;
  return j;
}

absl::StatusOr<BundleManifest> BundleManifest::FromJson(const json& j) {
  if (!j.is_object() || j.value("format", "") != kBundleFormat) {
    return absl::InvalidArgumentError(
        fmt::format("manifest format must be '{}'", kBundleFormat));
  }
  BundleManifest m;
  try {
    m.schema_version = j.at("schema_version").get<int>();
    if (m.schema_version != kBundleSchemaVersion) {
      return absl::FailedPreconditionError(
          fmt::format("unsupported bundle schema version {} (expected {})",
                      m.schema_version, kBundleSchemaVersion));
    }
    m.config_digest = j.at("config_digest").get<std::string>();
    m.corpus_digest = j.at("corpus_digest").get<std::string>();
    m.label_order = j.at("label_order").get<std::vector<std::string>>();
    m.feature_layout = j.at("feature_layout").get<std::vector<std::string>>();
    m.embedding = j.at("embedding");
    m.training = j.at("training");
    m.files = j.at("files").get<std::map<std::string, std::string>>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        fmt::format("malformed manifest: {}", e.what()));
  }
  std::vector<std::string> expected;
  for (Polarity p : kPolarityOrder) expected.emplace_back(PolarityName(p));
  if (m.label_order != expected) {
    return absl::FailedPreconditionError(
        "manifest label order does not match this build");
  }
  return m;
}

std::string CorpusDigest(const Corpus& corpus) {
  return Sha256Hex(SerializeCorpus(corpus));
}

absl::Status SaveBundle(const PipelineModel& model, const std::string& dir,
                        const std::string& corpus_digest,
                        const TrainingStats& stats) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::InternalError(fmt::format(
        "cannot create bundle directory '{}': {}", dir, ec.message()));
  }
  BundleManifest m;
  m.config_digest = ConfigDigest(model.config());
  m.corpus_digest = corpus_digest;
  for (Polarity p : kPolarityOrder) m.label_order.emplace_back(PolarityName(p));
  m.feature_layout = PairFeatureLayout(model.backend().dim());
  m.embedding = model.backend().Describe();
  m.training = stats.ToJson();

  const std::pair<const char*, std::string> components[] = {
      {kConfigFile, ConfigToJson(model.config()).dump(2) + "\n"},
      {kScorerFile, model.scorer().ToJson().dump() + "\n"},
      {kPolarityFile, model.polarity().ToJson().dump() + "\n"},
      {kResourcesFile, model.resources().ToJson().dump(2) + "\n"},
  };
  for (const auto& [name, content] : components) {
    RETURN_IF_ERROR(WriteFile(PathIn(dir, name), content));
    m.files[name] = Sha256Hex(content);
  }
  return WriteFile(PathIn(dir, kManifestFile), m.ToJson().dump(2) + "\n");
}

absl::Status CheckConfigDigest(const BundleManifest& manifest,
                               const PipelineConfig& config) {
  const std::string digest = ConfigDigest(config);
  if (digest != manifest.config_digest) {
    return absl::FailedPreconditionError(
        fmt::format("config digest {} does not match bundle digest {}", digest,
                    manifest.config_digest));
  }
  return absl::OkStatus();
}

absl::StatusOr<LoadedBundle> LoadBundle(
    const std::string& dir, const std::optional<PipelineConfig::Paths>& paths) {
  const std::string manifest_path = PathIn(dir, kManifestFile);
  ASSIGN_OR_RETURN(std::string manifest_text, ReadFile(manifest_path));
  ASSIGN_OR_RETURN(json manifest_json,
                   ParseComponent(manifest_path, manifest_text));
  auto manifest = BundleManifest::FromJson(manifest_json);
  if (!manifest.ok()) return InFile(manifest.status(), manifest_path);

  std::map<std::string, json> parsed;
  for (const char* name :
       {kConfigFile, kScorerFile, kPolarityFile, kResourcesFile}) {
    const std::string path = PathIn(dir, name);
    ASSIGN_OR_RETURN(std::string content, ReadFile(path));
    auto it = manifest->files.find(name);
    if (it == manifest->files.end()) {
      return absl::FailedPreconditionError(
          fmt::format("bundle manifest has no checksum for '{}'", name));
    }
    if (Sha256Hex(content) != it->second) {
      return absl::FailedPreconditionError(
          fmt::format("bundle file '{}' does not match its checksum", path));
    }
    ASSIGN_OR_RETURN(parsed[name], ParseComponent(path, content));
  }

  auto config = ConfigFromJson(parsed[kConfigFile]);
  if (!config.ok()) return InFile(config.status(), PathIn(dir, kConfigFile));
  if (paths) config->paths = *paths;
  if (ConfigDigest(*config) != manifest->config_digest) {
    return absl::FailedPreconditionError(fmt::format(
        "bundle config digest mismatch in '{}'", PathIn(dir, kConfigFile)));
  }
  auto resources = PipelineResources::FromJson(parsed[kResourcesFile]);
  if (!resources.ok()) {
    return InFile(resources.status(), PathIn(dir, kResourcesFile));
  }
  auto scorer = SpanScorerFromJson(parsed[kScorerFile]);
  if (!scorer.ok()) return InFile(scorer.status(), PathIn(dir, kScorerFile));
  auto polarity = PolarityModelFromJson(parsed[kPolarityFile]);
  if (!polarity.ok()) {
    return InFile(polarity.status(), PathIn(dir, kPolarityFile));
  }
  ASSIGN_OR_RETURN(auto backend, MakeBackend(*config));
  if (backend->Describe() != manifest->embedding) {
    return absl::FailedPreconditionError(
        fmt::format("embedding backend {} does not match bundle {}",
                    backend->Describe().dump(), manifest->embedding.dump()));
  }
  ASSIGN_OR_RETURN(
      PipelineModel model,
      PipelineModel::FromParts(*std::move(config), *std::move(resources),
                               std::move(backend), *std::move(scorer),
                               *std::move(polarity)));
  return LoadedBundle{*std::move(manifest), std::move(model)};
}

}  // namespace aste

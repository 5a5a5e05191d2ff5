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

#include "aste/config.h"

#include "aste/file_util.h"
#include "aste/hashing.h"
#include "aste/status_macros.h"
#include "fmt/format.h"

namespace aste {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

bool SameKind(const ojson& def, const json& value) {
  if (def.is_boolean()) return value.is_boolean();
  if (def.is_number_unsigned()) return value.is_number_unsigned();
  if (def.is_number_integer()) return value.is_number_integer();
  if (def.is_number()) return value.is_number();
  if (def.is_string()) return value.is_string();
  if (def.is_array()) return value.is_array();
  if (def.is_object()) return value.is_object();
  return false;
}

std::string KindName(const ojson& def) {
  if (def.is_boolean()) return "a boolean";
  if (def.is_number_unsigned()) return "a non-negative integer";
  if (def.is_number_integer()) return "an integer";
  if (def.is_number()) return "a number";
  if (def.is_string()) return "a string";
  if (def.is_array()) return "an array";
  return "an object";
}

absl::Status Merge(ojson& base, const json& patch, const std::string& prefix) {
  if (!patch.is_object()) {
    return absl::InvalidArgumentError(
        fmt::format("config{} must be an object",
                    prefix.empty() ? "" : " key '" + prefix + "'"));
  }
  for (const auto& [key, value] : patch.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!base.contains(key)) {
      return absl::InvalidArgumentError(
          fmt::format("unknown config key '{}'", path));
    }
    ojson& slot = base[key];
    if (!SameKind(slot, value)) {
      return absl::InvalidArgumentError(
          fmt::format("config key '{}' must be {}", path, KindName(slot)));
    }
    if (slot.is_object()) {
      RETURN_IF_ERROR(Merge(slot, value, path));
    } else if (slot.is_array()) {
      for (const json& item : value) {
        if (!item.is_string()) {
          return absl::InvalidArgumentError(
              fmt::format("config key '{}' must be an array of strings", path));
        }
      }
      slot = value;
    } else if (slot.is_number_float()) {
      slot = value.get<double>();
    } else {
      slot = value;
    }
  }
  return absl::OkStatus();
}

template <typename Parsed>
absl::Status ParseInto(const absl::StatusOr<Parsed>& parsed, Parsed& out,
                       std::string_view key) {
  if (!parsed.ok()) {
    return absl::InvalidArgumentError(fmt::format(
        "config key '{}': {}", key, std::string(parsed.status().message())));
  }
  out = *parsed;
  return absl::OkStatus();
}

absl::StatusOr<ScorerKind> ParseScorerKind(std::string_view s) {
  if (s == "logistic") return ScorerKind::kLogistic;
  if (s == "lexicon") return ScorerKind::kLexicon;
  if (s == "encoder") return ScorerKind::kEncoder;
  return absl::InvalidArgumentError(fmt::format(
      "unknown scorer '{}' (expected logistic, lexicon or encoder)", s));
}

absl::StatusOr<BackendKind> ParseBackendKind(std::string_view s) {
  if (s == "hashed") return BackendKind::kHashed;
  if (s == "precomputed") return BackendKind::kPrecomputed;
  return absl::InvalidArgumentError(fmt::format(
      "unknown embedding backend '{}' (expected hashed or precomputed)", s));
}

absl::Status Invalid(std::string_view key, std::string_view what) {
  return absl::InvalidArgumentError(
      fmt::format("config key '{}' {}", key, what));
}

}  // namespace

std::string_view ScorerKindName(ScorerKind kind) {
  switch (kind) {
    case ScorerKind::kLogistic:
      return "logistic";
    case ScorerKind::kLexicon:
      return "lexicon";
    case ScorerKind::kEncoder:
      return "encoder";
  }
  return "logistic";
}

std::string_view BackendKindName(BackendKind kind) {
  return kind == BackendKind::kHashed ? "hashed" : "precomputed";
}

ojson ConfigToJson(const PipelineConfig& c) {
  ojson j;
  j["seed"] = c.seed;
  j["paths"] = {{"corpus", c.paths.corpus},
                {"aspect_lexicon", c.paths.aspect_lexicon},
                {"opinion_lexicon", c.paths.opinion_lexicon},
                {"stopwords", c.paths.stopwords},
                {"spelling_lexicon", c.paths.spelling_lexicon},
                {"embedding_store", c.paths.embedding_store},
                {"model_bundle", c.paths.model_bundle}};
  j["ingest"] = {{"max_emoji_ratio", c.ingest.filter.max_emoji_ratio},
                 {"min_word_count", c.ingest.filter.min_word_count},
                 {"blocked_patterns", c.ingest.filter.blocked_patterns},
                 {"dedupe", c.ingest.filter.dedupe},
                 {"format", ExportFormatName(c.ingest.columns.format)},
                 {"text_column", c.ingest.columns.text},
                 {"id_column", c.ingest.columns.id},
                 {"date_column", c.ingest.columns.collected_at},
                 {"category_column", c.ingest.columns.product_category}};
  j["spanex"] = {{"max_span_len", c.spanex.max_span_len},
                 {"threshold", c.spanex.threshold},
                 {"top_k", c.spanex.top_k},
                 {"scorer", ScorerKindName(c.spanex.scorer)},
                 {"hash_bits", c.spanex.hash_bits},
                 {"epochs", c.spanex.epochs},
                 {"learning_rate", c.spanex.learning_rate},
                 {"l2", c.spanex.l2},
                 {"balance_classes", c.spanex.balance_classes}};
  j["pairmatch"] = {{"threshold", c.pairmatch.threshold},
                    {"cardinality", CardinalityName(c.pairmatch.cardinality)},
                    {"alpha", c.pairmatch.alpha},
                    {"beta", c.pairmatch.beta},
                    {"proximity_scale", c.pairmatch.proximity_scale}};
  const PolarityConfig& m = c.polarity.model;
  j["polarity"] = {{"backend", BackendKindName(c.polarity.backend)},
                   {"dim", c.polarity.dim},
                   {"model", PolarityModelKindName(m.model)},
                   {"trees", m.trees},
                   {"depth", m.depth},
                   {"learning_rate", m.learning_rate},
                   {"lambda", m.lambda},
                   {"min_child_weight", m.min_child_weight},
                   {"max_bins", m.max_bins},
                   {"class_weighting", m.class_weighting},
                   {"linear_epochs", m.linear_epochs},
                   {"linear_learning_rate", m.linear_learning_rate},
                   {"linear_l2", m.linear_l2}};
  j["eval"] = {{"k", c.eval.k}, {"match", MatchCriterionName(c.eval.match)}};
  return j;
}

ojson DefaultConfigJson() { return ConfigToJson(PipelineConfig()); }

absl::Status PipelineConfig::Validate() const {
  RETURN_IF_ERROR(ingest.filter.Validate());
  if (spanex.max_span_len < 1)
    return Invalid("spanex.max_span_len", "must be >= 1");
  if (!(spanex.threshold >= 0.0 && spanex.threshold <= 1.0)) {
    return Invalid("spanex.threshold", "must be in [0, 1]");
  }
  if (spanex.top_k < 1) return Invalid("spanex.top_k", "must be >= 1");
  if (spanex.hash_bits < 8 || spanex.hash_bits > 24) {
    return Invalid("spanex.hash_bits", "must be in [8, 24]");
  }
  if (spanex.epochs < 1) return Invalid("spanex.epochs", "must be >= 1");
  if (!(spanex.learning_rate > 0.0)) {
    return Invalid("spanex.learning_rate", "must be > 0");
  }
  if (!(spanex.l2 >= 0.0)) return Invalid("spanex.l2", "must be >= 0");
  RETURN_IF_ERROR(pairmatch.Validate());
  if (polarity.dim < 8) return Invalid("polarity.dim", "must be >= 8");
  RETURN_IF_ERROR(polarity.model.Validate());
  if (eval.k < 2) return Invalid("eval.k", "must be >= 2");
  return absl::OkStatus();
}

absl::StatusOr<PipelineConfig> ConfigFromJson(const json& j) {
  ojson tree = DefaultConfigJson();
  RETURN_IF_ERROR(Merge(tree, j, ""));
  PipelineConfig c;
  c.seed = tree["seed"].get<uint64_t>();
  const ojson& p = tree["paths"];
  c.paths.corpus = p["corpus"].get<std::string>();
  c.paths.aspect_lexicon = p["aspect_lexicon"].get<std::string>();
  c.paths.opinion_lexicon = p["opinion_lexicon"].get<std::string>();
  c.paths.stopwords = p["stopwords"].get<std::string>();
  c.paths.spelling_lexicon = p["spelling_lexicon"].get<std::string>();
  c.paths.embedding_store = p["embedding_store"].get<std::string>();
  c.paths.model_bundle = p["model_bundle"].get<std::string>();

  const ojson& in = tree["ingest"];
  c.ingest.filter.max_emoji_ratio = in["max_emoji_ratio"].get<double>();
  c.ingest.filter.min_word_count = in["min_word_count"].get<size_t>();
  c.ingest.filter.blocked_patterns =
      in["blocked_patterns"].get<std::vector<std::string>>();
  c.ingest.filter.dedupe = in["dedupe"].get<bool>();
  RETURN_IF_ERROR(ParseInto(ParseExportFormat(in["format"].get<std::string>()),
                            c.ingest.columns.format, "ingest.format"));
  c.ingest.columns.text = in["text_column"].get<std::string>();
  c.ingest.columns.id = in["id_column"].get<std::string>();
  c.ingest.columns.collected_at = in["date_column"].get<std::string>();
  c.ingest.columns.product_category = in["category_column"].get<std::string>();

  const ojson& s = tree["spanex"];
  c.spanex.max_span_len = s["max_span_len"].get<size_t>();
  c.spanex.threshold = s["threshold"].get<double>();
  c.spanex.top_k = s["top_k"].get<size_t>();
  RETURN_IF_ERROR(ParseInto(ParseScorerKind(s["scorer"].get<std::string>()),
                            c.spanex.scorer, "spanex.scorer"));
  c.spanex.hash_bits = s["hash_bits"].get<int>();
  c.spanex.epochs = s["epochs"].get<int>();
  c.spanex.learning_rate = s["learning_rate"].get<double>();
  c.spanex.l2 = s["l2"].get<double>();
  c.spanex.balance_classes = s["balance_classes"].get<bool>();

  const ojson& pm = tree["pairmatch"];
  c.pairmatch.threshold = pm["threshold"].get<double>();
  RETURN_IF_ERROR(
      ParseInto(ParseCardinality(pm["cardinality"].get<std::string>()),
                c.pairmatch.cardinality, "pairmatch.cardinality"));
  c.pairmatch.alpha = pm["alpha"].get<double>();
  c.pairmatch.beta = pm["beta"].get<double>();
  c.pairmatch.proximity_scale = pm["proximity_scale"].get<double>();

  const ojson& po = tree["polarity"];
  RETURN_IF_ERROR(ParseInto(ParseBackendKind(po["backend"].get<std::string>()),
                            c.polarity.backend, "polarity.backend"));
  c.polarity.dim = po["dim"].get<size_t>();
  PolarityConfig& m = c.polarity.model;
  RETURN_IF_ERROR(
      ParseInto(ParsePolarityModelKind(po["model"].get<std::string>()), m.model,
                "polarity.model"));
  m.trees = po["trees"].get<int>();
  m.depth = po["depth"].get<int>();
  m.learning_rate = po["learning_rate"].get<double>();
  m.lambda = po["lambda"].get<double>();
  m.min_child_weight = po["min_child_weight"].get<double>();
  m.max_bins = po["max_bins"].get<int>();
  m.class_weighting = po["class_weighting"].get<bool>();
  m.linear_epochs = po["linear_epochs"].get<int>();
  m.linear_learning_rate = po["linear_learning_rate"].get<double>();
  m.linear_l2 = po["linear_l2"].get<double>();
  m.seed = c.seed;

  const ojson& ev = tree["eval"];
  c.eval.k = ev["k"].get<int>();
  RETURN_IF_ERROR(ParseInto(ParseMatchCriterion(ev["match"].get<std::string>()),
                            c.eval.match, "eval.match"));
  RETURN_IF_ERROR(c.Validate());
  return c;
}

absl::Status ApplyOverrides(ojson& tree,
                            const std::vector<std::string>& overrides) {
  for (const std::string& item : overrides) {
    const size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      return absl::InvalidArgumentError(
          fmt::format("override '{}' must look like key=value", item));
    }
    const std::string key = item.substr(0, eq);
    const std::string raw = item.substr(eq + 1);
    json value = json::parse(raw, nullptr, /*allow_exceptions=*/false);
    if (value.is_discarded()) value = raw;
    // Build a nested patch {"a": {"b": value}} and merge it so overrides get
    // exactly the same checks as config files.
    json patch = value;
    size_t end = key.size();
    while (true) {
      const size_t dot = key.rfind('.', end - 1);
      const std::string part =
          key.substr(dot == std::string::npos ? 0 : dot + 1,
                     end - (dot == std::string::npos ? 0 : dot + 1));
      if (part.empty()) {
        return absl::InvalidArgumentError(
            fmt::format("override '{}' has an empty key segment", item));
      }
      patch = json{{part, patch}};
      if (dot == std::string::npos) break;
      end = dot;
    }
    RETURN_IF_ERROR(Merge(tree, patch, ""));
  }
  return absl::OkStatus();
}

absl::StatusOr<PipelineConfig> LoadConfig(
    const std::string& path, const std::vector<std::string>& overrides) {
  ojson tree = DefaultConfigJson();
  if (!path.empty()) {
    ASSIGN_OR_RETURN(std::string content, ReadFile(path));
    json file = json::parse(content, nullptr, /*allow_exceptions=*/false);
    if (file.is_discarded()) {
      return absl::InvalidArgumentError(
          fmt::format("{}: config is not valid JSON", path));
    }
    auto merged = Merge(tree, file, "");
    if (!merged.ok()) {
      return absl::InvalidArgumentError(
          fmt::format("{}: {}", path, std::string(merged.message())));
    }
  }
  RETURN_IF_ERROR(ApplyOverrides(tree, overrides));
  return ConfigFromJson(tree);
}

std::string ConfigDigest(const PipelineConfig& config) {
  json canonical = ConfigToJson(config);
  canonical.erase("paths");
  return Sha256Hex(canonical.dump());
}

}  // namespace aste

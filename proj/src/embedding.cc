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

#include "aste/embedding.h"

#include <cmath>
#include <optional>

#include "aste/file_util.h"
#include "aste/hashing.h"
#include "aste/pairmatch.h"
#include "aste/status_macros.h"
#include "aste/unicode.h"
#include "fmt/format.h"

namespace aste {
namespace {

using json = nlohmann::json;

constexpr char kStoreFormat[] = "aste-embeddings";
constexpr int kStoreVersion = 1;

absl::Status LineError(size_t line, std::string_view what) {
  return absl::InvalidArgumentError(
      fmt::format("embedding store line {}: {}", line, what));
}

}  // namespace

absl::StatusOr<HashedEmbeddingBackend> HashedEmbeddingBackend::Create(
    size_t dim, uint64_t seed) {
  if (dim < 8) {
    return absl::InvalidArgumentError(
        fmt::format("embedding dimension must be >= 8 (got {})", dim));
  }
  return HashedEmbeddingBackend(dim, seed);
}

Vector HashedEmbeddingBackend::EmbedToken(std::u32string_view token) const {
  Vector v(dim_, 0.0);
  if (token.empty()) return v;
  const std::u32string marked = U"<" + std::u32string(token) + U">";
  for (size_t n = 2; n <= 4; ++n) {
    for (size_t s = 0; s + n <= marked.size(); ++s) {
      const uint64_t h = SeededHash(
          EncodeUtf8(std::u32string_view(marked).substr(s, n)), seed_);
      v[h % dim_] += (h >> 63) ? -1.0 : 1.0;
    }
  }
  double norm = L2Norm(v);
  if (norm == 0.0) {
    // Every n-gram cancelled out; fall back to the whole token.
    v[SeededHash(EncodeUtf8(token), seed_ ^ 1) % dim_] = 1.0;
    norm = 1.0;
  }
  for (double& x : v) x /= norm;
  return v;
}

absl::StatusOr<TokenMatrix> HashedEmbeddingBackend::Embed(
    std::string_view, const TokenizedText& text) const {
  TokenMatrix out;
  out.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    out.push_back(EmbedToken(text.TokenView(i)));
  }
  return out;
}

json HashedEmbeddingBackend::Describe() const {
  return {{"backend", "hashed"}, {"dim", dim_}, {"seed", seed_}};
}

absl::Status EmbeddingStore::Add(std::string id, Entry entry) {
  if (entry.tokens.size() != entry.vectors.size()) {
    return absl::InvalidArgumentError(
        fmt::format("review '{}': {} tokens but {} vectors", id,
                    entry.tokens.size(), entry.vectors.size()));
  }
  for (const Vector& v : entry.vectors) {
    if (v.size() != dim_) {
      return absl::InvalidArgumentError(
          fmt::format("review '{}': vector of dimension {} in a store of "
                      "dimension {}",
                      id, v.size(), dim_));
    }
    for (double x : v) {
      if (!std::isfinite(x)) {
        return absl::InvalidArgumentError(
            fmt::format("review '{}': non-finite vector entry", id));
      }
    }
  }
  if (!entries_.emplace(id, std::move(entry)).second) {
    return absl::InvalidArgumentError(
        fmt::format("duplicate review id '{}' in embedding store", id));
  }
  return absl::OkStatus();
}

const EmbeddingStore::Entry* EmbeddingStore::Find(std::string_view id) const {
  auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : &it->second;
}

absl::StatusOr<EmbeddingStore> EmbeddingStore::Parse(std::string_view content) {
  const std::vector<std::string_view> lines = SplitLines(content);
  size_t line_no = 0;
  std::optional<EmbeddingStore> store;
  for (std::string_view line : lines) {
    ++line_no;
    if (StripWhitespace(line).empty()) continue;
    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) {
      return LineError(line_no, "not a JSON object");
    }
    if (!store) {
      if (j.value("format", "") != kStoreFormat) {
        return LineError(line_no, "missing aste-embeddings header");
      }
      if (j.value("version", 0) != kStoreVersion) {
        return LineError(line_no, "unsupported store version");
      }
      if (!j.contains("dim") || !j["dim"].is_number_unsigned() ||
          j["dim"].get<size_t>() == 0) {
        return LineError(line_no, "header needs a positive 'dim'");
      }
      store.emplace(j["dim"].get<size_t>());
      continue;
    }
    Entry entry;
    std::string id;
    try {
      id = j.at("id").get<std::string>();
      entry.tokens = j.at("tokens").get<std::vector<std::string>>();
      entry.vectors = j.at("vectors").get<TokenMatrix>();
    } catch (const json::exception& e) {
      return LineError(line_no, e.what());
    }
    if (auto s = store->Add(std::move(id), std::move(entry)); !s.ok()) {
      return LineError(line_no, std::string(s.message()));
    }
  }
  if (!store) return absl::InvalidArgumentError("empty embedding store");
  return *std::move(store);
}

absl::StatusOr<EmbeddingStore> EmbeddingStore::Load(const std::string& path) {
  ASSIGN_OR_RETURN(std::string content, ReadFile(path));
  auto store = Parse(content);
  if (!store.ok()) {
    return absl::Status(
        store.status().code(),
        fmt::format("{}: {}", path, std::string(store.status().message())));
  }
  return store;
}

std::string EmbeddingStore::Serialize() const {
  std::string out =
      fmt::format("{{\"format\":\"{}\",\"version\":{},\"dim\":{}}}\n",
                  kStoreFormat, kStoreVersion, dim_);
  for (const auto& [id, entry] : entries_) {
    out += "{\"id\":" + json(id).dump() +
           ",\"tokens\":" + json(entry.tokens).dump() + ",\"vectors\":[";
    for (size_t r = 0; r < entry.vectors.size(); ++r) {
      if (r) out += ',';
      out += '[';
      for (size_t c = 0; c < entry.vectors[r].size(); ++c) {
        if (c) out += ',';
        out += fmt::format("{:.9g}", entry.vectors[r][c]);
      }
      out += ']';
    }
    out += "]}\n";
  }
  return out;
}

absl::Status EmbeddingStore::Save(const std::string& path) const {
  return WriteFile(path, Serialize());
}

absl::StatusOr<TokenMatrix> PrecomputedEmbeddingBackend::Embed(
    std::string_view review_id, const TokenizedText& text) const {
  const EmbeddingStore::Entry* entry = store_.Find(review_id);
  if (entry == nullptr) {
    return absl::NotFoundError(
        fmt::format("review '{}' missing from embedding store", review_id));
  }
  if (entry->vectors.size() != text.size()) {
    return absl::FailedPreconditionError(fmt::format(
        "review '{}': embedding store has {} token vectors but the text has "
        "{} tokens",
        review_id, entry->vectors.size(), text.size()));
  }
  return entry->vectors;
}

json PrecomputedEmbeddingBackend::Describe() const {
  return {{"backend", "precomputed"}, {"dim", store_.dim()}};
}

std::vector<std::string> PairFeatureLayout(size_t d) {
  std::vector<std::string> names;
  for (const char* block : {"aspect_mean", "opinion_mean", "review_mean"}) {
    for (size_t i = 0; i < d; ++i) {
      names.push_back(fmt::format("{}[{}]", block, i));
    }
  }
  for (const char* s :
       {"token_gap", "aspect_len", "opinion_len", "edge_weight"}) {
    names.emplace_back(s);
  }
  return names;
}

absl::StatusOr<Vector> FeaturizePair(const TokenMatrix& vectors,
                                     TokenInterval aspect,
                                     TokenInterval opinion,
                                     double edge_weight) {
  const size_t n = vectors.size();
  if (aspect.first > aspect.last || aspect.last >= n ||
      opinion.first > opinion.last || opinion.last >= n) {
    return absl::OutOfRangeError(
        fmt::format("pair spans [{}, {}] / [{}, {}] outside {} tokens",
                    aspect.first, aspect.last, opinion.first, opinion.last, n));
  }
  Vector out;
  out.reserve(PairFeatureDim(vectors[0].size()));
  for (const Vector& block : {MeanPool(vectors, aspect.first, aspect.last),
                              MeanPool(vectors, opinion.first, opinion.last),
                              MeanPool(vectors, 0, n - 1)}) {
    out.insert(out.end(), block.begin(), block.end());
  }
  out.push_back(static_cast<double>(TokenGap(aspect, opinion)));
  out.push_back(static_cast<double>(aspect.length()));
  out.push_back(static_cast<double>(opinion.length()));
  out.push_back(edge_weight);
  return out;
}

absl::StatusOr<Vector> FeaturizePair(const EmbeddingBackend& backend,
                                     std::string_view review_id,
                                     const TokenizedText& text,
                                     TokenInterval aspect,
                                     TokenInterval opinion,
                                     double edge_weight) {
  ASSIGN_OR_RETURN(TokenMatrix vectors, backend.Embed(review_id, text));
  return FeaturizePair(vectors, aspect, opinion, edge_weight);
}

}  // namespace aste

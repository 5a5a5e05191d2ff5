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

#ifndef ASTE_EMBEDDING_H_
#define ASTE_EMBEDDING_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "aste/linalg.h"
#include "aste/spanex.h"
#include "aste/textnorm.h"
#include "json.hpp"

namespace aste {

// Produces one d-dimensional vector per token of a review.
class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;

  virtual absl::StatusOr<TokenMatrix> Embed(
      std::string_view review_id, const TokenizedText& text) const = 0;
  virtual size_t dim() const = 0;
  virtual nlohmann::json Describe() const = 0;
};

// Signed feature hashing of character n-grams (n = 2..4) of "<token>" into
// d buckets, L2-normalized. Context-free: equal tokens get equal vectors.
class HashedEmbeddingBackend : public EmbeddingBackend {
 public:
  static absl::StatusOr<HashedEmbeddingBackend> Create(size_t dim,
                                                       uint64_t seed);

  absl::StatusOr<TokenMatrix> Embed(std::string_view review_id,
                                    const TokenizedText& text) const override;
  size_t dim() const override { return dim_; }
  nlohmann::json Describe() const override;

  Vector EmbedToken(std::u32string_view token) const;

 private:
  HashedEmbeddingBackend(size_t dim, uint64_t seed) : dim_(dim), seed_(seed) {}

  size_t dim_;
  uint64_t seed_;
};

// Vectors produced offline (for example by a contextual encoder), keyed by
// review id.
//
// File layout (UTF-8 JSON lines):
//   {"format":"aste-embeddings","version":1,"dim":D}
//   {"id":"<review id>","tokens":["t0",...],"vectors":[[...D floats],...]}
//   ...
// One record per review; `tokens` and `vectors` have equal length and follow
// the toolkit's tokenization. Floats are written with 9 significant digits.
class EmbeddingStore {
 public:
  struct Entry {
    std::vector<std::string> tokens;
    TokenMatrix vectors;
  };

  explicit EmbeddingStore(size_t dim) : dim_(dim) {}

  static absl::StatusOr<EmbeddingStore> Parse(std::string_view content);
  static absl::StatusOr<EmbeddingStore> Load(const std::string& path);
  std::string Serialize() const;
  absl::Status Save(const std::string& path) const;

  absl::Status Add(std::string id, Entry entry);
  const Entry* Find(std::string_view id) const;
  size_t dim() const { return dim_; }
  size_t size() const { return entries_.size(); }

 private:
  size_t dim_;
  std::map<std::string, Entry, std::less<>> entries_;
};

class PrecomputedEmbeddingBackend : public EmbeddingBackend {
 public:
  explicit PrecomputedEmbeddingBackend(EmbeddingStore store)
      : store_(std::move(store)) {}

  absl::StatusOr<TokenMatrix> Embed(std::string_view review_id,
                                    const TokenizedText& text) const override;
  size_t dim() const override { return store_.dim(); }
  nlohmann::json Describe() const override;

 private:
  EmbeddingStore store_;
};

// Number of scalar features appended after the three pooled blocks.
inline constexpr size_t kPairScalarFeatures = 4;

inline size_t PairFeatureDim(size_t d) { return 3 * d + kPairScalarFeatures; }

// Feature names in layout order: aspect_mean[i], opinion_mean[i],
// review_mean[i], token_gap, aspect_len, opinion_len, edge_weight.
std::vector<std::string> PairFeatureLayout(size_t d);

// [mean(aspect) | mean(opinion) | mean(review) | gap, |aspect|, |opinion|,
// edge_weight]. `vectors` must have one row per token.
absl::StatusOr<Vector> FeaturizePair(const TokenMatrix& vectors,
                                     TokenInterval aspect,
                                     TokenInterval opinion, double edge_weight);

absl::StatusOr<Vector> FeaturizePair(const EmbeddingBackend& backend,
                                     std::string_view review_id,
                                     const TokenizedText& text,
                                     TokenInterval aspect,
                                     TokenInterval opinion, double edge_weight);

}  // namespace aste

#endif  // ASTE_EMBEDDING_H_

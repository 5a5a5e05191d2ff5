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

#ifndef ASTE_CORPUS_H_
#define ASTE_CORPUS_H_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace aste {

enum class Platform { kDaraz, kFacebook, kRokomari, kShajgoj, kOther };
inline constexpr std::array<Platform, 5> kAllPlatforms = {
    Platform::kDaraz, Platform::kFacebook, Platform::kRokomari,
    Platform::kShajgoj, Platform::kOther};

std::string_view PlatformName(Platform platform);
absl::StatusOr<Platform> ParsePlatform(std::string_view name);

// Label order is fixed; classifiers index their outputs with it.
enum class Polarity { kPositive = 0, kNegative = 1, kNeutral = 2 };
inline constexpr int kNumPolarities = 3;
inline constexpr std::array<Polarity, kNumPolarities> kPolarityOrder = {
    Polarity::kPositive, Polarity::kNegative, Polarity::kNeutral};

std::string_view PolarityName(Polarity polarity);
absl::StatusOr<Polarity> ParsePolarity(std::string_view name);

enum class SpanRole { kAspect, kOpinion };

// Code point interval [start, end) into a review's raw text.
struct Span {
  size_t start = 0;
  size_t end = 0;

  friend bool operator==(const Span&, const Span&) = default;
  friend auto operator<=>(const Span&, const Span&) = default;
};

// Identity of a triplet is (aspect, opinion, polarity). The aspect category
// is descriptive metadata and does not take part in comparisons.
struct Triplet {
  Span aspect;
  Span opinion;
  Polarity polarity = Polarity::kPositive;
  std::optional<std::string> category;

  friend bool operator==(const Triplet& a, const Triplet& b) {
    return a.aspect == b.aspect && a.opinion == b.opinion &&
           a.polarity == b.polarity;
  }
  friend bool operator<(const Triplet& a, const Triplet& b) {
    if (a.aspect != b.aspect) return a.aspect < b.aspect;
    if (a.opinion != b.opinion) return a.opinion < b.opinion;
    return a.polarity < b.polarity;
  }
};

struct Review {
  std::string id;
  Platform platform = Platform::kOther;
  std::string raw_text;  // UTF-8
  std::optional<std::string> collected_at;
  std::optional<std::string> product_category;

  friend bool operator==(const Review&, const Review&) = default;
};

struct AnnotationRecord {
  std::string annotator_id;
  std::vector<Triplet> triplets;
};

struct AnnotatedReview {
  Review review;
  std::vector<AnnotationRecord> annotations;
  std::optional<std::vector<Triplet>> gold;
};

using Corpus = std::vector<AnnotatedReview>;

struct Adjudication {
  std::vector<Triplet> gold;       // sorted
  std::vector<Triplet> conflicts;  // sorted
};

struct CategoryCounts {
  size_t total = 0;
  size_t positive = 0;
  size_t negative = 0;
  size_t neutral = 0;

  friend bool operator==(const CategoryCounts&,
                         const CategoryCounts&) = default;
};

// Table-style dataset statistics.
struct CorpusStats {
  size_t total_reviews = 0;
  std::map<Platform, size_t> per_platform;
  std::map<std::string, CategoryCounts> per_category;

  // total_reviews equals the platform sum and every category total equals
  // its polarity sum.
  absl::Status Validate() const;
};

// Expected counts shipped next to a corpus fixture. Absent fields are not
// checked.
struct CorpusManifest {
  std::optional<size_t> total_reviews;
  std::map<Platform, size_t> per_platform;
  std::map<std::string, CategoryCounts> per_category;
};

inline constexpr std::string_view kUncategorized = "uncategorized";

struct CorpusParseOptions {
  // Freshly ingested reviews have no annotation records yet.
  bool require_annotations = true;
};

// Validates one review: id, text and every triplet span. `context` prefixes
// error messages (for example "line 7").
absl::Status ValidateAnnotatedReview(const AnnotatedReview& review,
                                     std::string_view context = {},
                                     CorpusParseOptions options = {});

// Line-delimited corpus records. Errors name the line number and the field.
absl::StatusOr<Corpus> ParseCorpus(std::string_view content,
                                   CorpusParseOptions options = {});
absl::StatusOr<Corpus> LoadCorpus(const std::string& path,
                                  CorpusParseOptions options = {});

std::string SerializeCorpus(const Corpus& corpus);
absl::Status SaveCorpus(const Corpus& corpus, const std::string& path);

// Majority vote over exact (aspect, opinion, polarity) matches. A triplet is
// gold iff a strict majority of records contain it; everything else that
// appears at least once is a conflict. Needs at least two records.
absl::StatusOr<Adjudication> Adjudicate(
    std::span<const AnnotationRecord> annotations);

// Mean pairwise F1 between annotators' triplet sets.
absl::StatusOr<double> Agreement(std::span<const AnnotationRecord> annotations);

// Fills `gold` for every review that has at least two annotation records, or
// copies the single record when there is only one. Returns the number of
// conflicting triplets left out of gold.
size_t AdjudicateCorpus(Corpus& corpus);

absl::StatusOr<CorpusStats> ComputeCorpusStats(const Corpus& corpus);

absl::StatusOr<CorpusManifest> ParseManifest(std::string_view content);
absl::StatusOr<CorpusManifest> LoadManifest(const std::string& path);
std::string SerializeManifest(const CorpusManifest& manifest);
// The manifest that `stats` satisfies exactly.
CorpusManifest ManifestFromStats(const CorpusStats& stats);

// Fixed-width platform table followed by the category/polarity table.
std::string RenderCorpusStats(const CorpusStats& stats);

absl::Status CheckManifest(const CorpusStats& stats,
                           const CorpusManifest& manifest);

// Raw substring addressed by a span.
std::string SpanText(const Review& review, Span span);

}  // namespace aste

#endif  // ASTE_CORPUS_H_

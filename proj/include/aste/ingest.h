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

#ifndef ASTE_INGEST_H_
#define ASTE_INGEST_H_

#include <cstddef>
#include <map>
#include <regex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "aste/corpus.h"

namespace aste {

enum class ExportFormat { kAuto, kCsv, kTsv, kJsonl };

std::string_view ExportFormatName(ExportFormat format);
absl::StatusOr<ExportFormat> ParseExportFormat(std::string_view name);

// Which export columns (or record fields) feed which Review fields. Only the
// text column is mandatory; empty names are ignored.
struct ColumnMap {
  std::string text = "text";
  std::string id;
  std::string collected_at;
  std::string product_category;
  ExportFormat format = ExportFormat::kAuto;
};

// Rejection reasons, in the order the rules are evaluated.
inline constexpr std::string_view kReasonEmpty = "empty";
inline constexpr std::string_view kReasonBlockedPattern = "blocked_pattern";
inline constexpr std::string_view kReasonEmojiRatio = "emoji_ratio";
inline constexpr std::string_view kReasonWordCount = "word_count";
inline constexpr std::string_view kReasonDuplicate = "duplicate";

struct IngestReport {
  size_t input = 0;
  size_t accepted = 0;
  std::map<std::string, size_t> rejected;
  size_t duplicates_removed = 0;

  // accepted + sum(rejected) + duplicates_removed == input.
  bool Balanced() const;
  std::string ToJson() const;
};

struct ExportReadResult {
  std::vector<Review> reviews;
  IngestReport report;  // counts rows dropped for empty text
};

// Reads a platform export (CSV/TSV with a header row, or line-delimited JSON
// objects). Review ids are synthesized from the platform, the row number and
// the row content, or taken from the id column when one is mapped. Rows with
// empty text are dropped and counted under "empty".
absl::StatusOr<ExportReadResult> ReadPlatformExport(std::string_view content,
                                                    Platform platform,
                                                    const ColumnMap& columns);
absl::StatusOr<ExportReadResult> ReadPlatformExportFile(const std::string& path,
                                                        Platform platform,
                                                        ColumnMap columns);

struct FilterPolicy {
  double max_emoji_ratio = 0.5;
  size_t min_word_count = 2;
  // ECMAScript regular expressions searched in the raw UTF-8 text.
  std::vector<std::string> blocked_patterns = {R"(https?://)", R"(www\.)"};
  bool dedupe = true;

  absl::Status Validate() const;
};

struct FilterResult {
  std::vector<Review> kept;
  IngestReport report;
  // (review id, reason) for every review that was not kept, in input order.
  std::vector<std::pair<std::string, std::string>> rejections;
};

// Emoji share of a review: emoji / (emoji + word tokens), 0 for empty text.
double EmojiRatio(std::string_view raw_text);

// Key used for duplicate detection: case-folded NFC text with whitespace
// runs collapsed and ends trimmed.
std::u32string DedupeKey(std::string_view raw_text);

// Applies the relevance rules in fixed order (blocked pattern, emoji ratio,
// word count, duplicate); each rejected review carries the first rule it
// fails.
class ReviewFilter {
 public:
  static absl::StatusOr<ReviewFilter> Create(FilterPolicy policy);

  FilterResult Apply(const std::vector<Review>& reviews) const;

  const FilterPolicy& policy() const { return policy_; }

 private:
  ReviewFilter(FilterPolicy policy, std::vector<std::regex> patterns)
      : policy_(std::move(policy)), patterns_(std::move(patterns)) {}

  FilterPolicy policy_;
  std::vector<std::regex> patterns_;
};

// Convenience wrapper: validates the policy, then filters.
absl::StatusOr<FilterResult> FilterReviews(const std::vector<Review>& reviews,
                                           const FilterPolicy& policy);

// Wraps accepted reviews as corpus records awaiting annotation (no
// annotation records yet). Parse them back with
// CorpusParseOptions::require_annotations = false.
Corpus ToUnannotatedCorpus(const std::vector<Review>& reviews);

}  // namespace aste

#endif  // ASTE_INGEST_H_

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

#include "aste/ingest.h"

#include <set>

#include "aste/file_util.h"
#include "aste/hashing.h"
#include "aste/status_macros.h"
#include "aste/textnorm.h"
#include "aste/unicode.h"
#include "fmt/format.h"
#include "json.hpp"

namespace aste {
namespace {

using json = nlohmann::json;

struct Row {
  size_t line = 0;  // 1-based line where the row starts
  std::vector<std::string> fields;
};

// RFC 4180 style parsing: quoted fields may contain delimiters, doubled
// quotes and newlines.
absl::StatusOr<std::vector<Row>> ParseDelimited(std::string_view content,
                                                char delimiter) {
  std::vector<Row> rows;
  Row row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  size_t line = 1;
  row.line = 1;
  auto end_field = [&] {
    row.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    const bool blank = row.fields.size() == 1 && row.fields[0].empty();
    if (!blank) rows.push_back(std::move(row));
    row = Row{};
    row.line = line;
  };
  for (size_t i = 0; i < content.size(); ++i) {
    const char c = content[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == delimiter) {
      end_field();
    } else if (c == '\n') {
      ++line;
      end_row();
    } else if (c == '\r') {
      // tolerated before '\n'
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) {
    return absl::InvalidArgumentError(
        fmt::format("unterminated quoted field starting on line {}", row.line));
  }
  if (field_started || !row.fields.empty()) end_row();
  return rows;
}

ExportFormat FormatFromPath(const std::string& path) {
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() &&
           path.compare(path.size() - suffix.size(), suffix.size(), suffix) ==
               0;
  };
  if (ends_with(".tsv") || ends_with(".tab")) return ExportFormat::kTsv;
  if (ends_with(".jsonl") || ends_with(".ndjson") || ends_with(".json")) {
    return ExportFormat::kJsonl;
  }
  return ExportFormat::kCsv;
}

std::string SynthesizeId(Platform platform, size_t row_number,
                         std::string_view row_content) {
  const std::string key = fmt::format("{}\x1f{}\x1f{}", PlatformName(platform),
                                      row_number, row_content);
  return fmt::format("{}-{:016x}", PlatformName(platform), Fnv1a64(key));
}

struct RawRow {
  size_t line = 0;
  std::string text;
  std::string id;
  std::string collected_at;
  std::string product_category;
  std::string content;  // canonical row content for id synthesis
};

absl::StatusOr<std::vector<RawRow>> ReadDelimitedRows(
    std::string_view content, char delimiter, const ColumnMap& columns) {
  ASSIGN_OR_RETURN(std::vector<Row> rows, ParseDelimited(content, delimiter));
  if (rows.empty()) return std::vector<RawRow>{};
  const std::vector<std::string>& header = rows.front().fields;
  auto column_index = [&](const std::string& name) -> std::optional<size_t> {
    if (name.empty()) return std::nullopt;
    for (size_t i = 0; i < header.size(); ++i) {
      if (StripWhitespace(header[i]) == name) return i;
    }
    return std::nullopt;
  };
  const auto text_col = column_index(columns.text);
  if (!text_col) {
    return absl::InvalidArgumentError(
        fmt::format("missing text column '{}'", columns.text));
  }
  const auto id_col = column_index(columns.id);
  const auto date_col = column_index(columns.collected_at);
  const auto category_col = column_index(columns.product_category);
  std::vector<RawRow> out;
  for (size_t r = 1; r < rows.size(); ++r) {
    const Row& row = rows[r];
    auto get = [&](std::optional<size_t> col) -> std::string {
      if (!col || *col >= row.fields.size()) return {};
      return row.fields[*col];
    };
    RawRow raw;
    raw.line = row.line;
    raw.text = get(text_col);
    raw.id = get(id_col);
    raw.collected_at = get(date_col);
    raw.product_category = get(category_col);
    for (const std::string& f : row.fields) {
      raw.content += f;
      raw.content.push_back('\x1e');
    }
    out.push_back(std::move(raw));
  }
  return out;
}

absl::StatusOr<std::vector<RawRow>> ReadJsonlRows(std::string_view content,
                                                  const ColumnMap& columns) {
  std::vector<RawRow> out;
  const auto lines = SplitLines(content);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (StripWhitespace(lines[i]).empty()) continue;
    const json obj = json::parse(lines[i], nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      return absl::InvalidArgumentError(
          fmt::format("line {}: not a well-formed record object", i + 1));
    }
    auto get = [&](const std::string& name,
                   bool required) -> absl::StatusOr<std::string> {
      if (name.empty()) return std::string();
      const auto it = obj.find(name);
      if (it == obj.end() || it->is_null()) {
        if (required) {
          return absl::InvalidArgumentError(
              fmt::format("line {}: missing text column '{}'", i + 1, name));
        }
        return std::string();
      }
      if (it->is_string()) return it->get<std::string>();
      if (it->is_number()) return it->dump();
      return absl::InvalidArgumentError(
          fmt::format("line {}: field '{}' must be a string", i + 1, name));
    };
    RawRow raw;
    raw.line = i + 1;
    ASSIGN_OR_RETURN(raw.text, get(columns.text, true));
    ASSIGN_OR_RETURN(raw.id, get(columns.id, false));
    ASSIGN_OR_RETURN(raw.collected_at, get(columns.collected_at, false));
    ASSIGN_OR_RETURN(raw.product_category,
                     get(columns.product_category, false));
    raw.content = obj.dump();
    out.push_back(std::move(raw));
  }
  return out;
}

bool IsBlank(std::string_view text) {
  for (char32_t c : DecodeUtf8Lossy(text)) {
    if (!IsWhitespace(c)) return false;
  }
  return true;
}

}  // namespace

std::string_view ExportFormatName(ExportFormat format) {
  switch (format) {
    case ExportFormat::kAuto:
      return "auto";
    case ExportFormat::kCsv:
      return "csv";
    case ExportFormat::kTsv:
      return "tsv";
    case ExportFormat::kJsonl:
      return "jsonl";
  }
  return "auto";
}

absl::StatusOr<ExportFormat> ParseExportFormat(std::string_view name) {
  if (name == "auto") return ExportFormat::kAuto;
  if (name == "csv") return ExportFormat::kCsv;
  if (name == "tsv") return ExportFormat::kTsv;
  if (name == "jsonl") return ExportFormat::kJsonl;
  return absl::InvalidArgumentError(
      fmt::format("unknown export format '{}'", name));
}

bool IngestReport::Balanced() const {
  size_t total = accepted + duplicates_removed;
  for (const auto& [reason, count] : rejected) total += count;
  return total == input;
}

std::string IngestReport::ToJson() const {
  nlohmann::ordered_json j;
  j["input"] = input;
  j["accepted"] = accepted;
  j["rejected"] = nlohmann::ordered_json::object();
  for (const auto& [reason, count] : rejected) j["rejected"][reason] = count;
  j["duplicates_removed"] = duplicates_removed;
  return j.dump(2) + "\n";
}

absl::StatusOr<ExportReadResult> ReadPlatformExport(std::string_view content,
                                                    Platform platform,
                                                    const ColumnMap& columns) {
  if (columns.text.empty()) {
    return absl::InvalidArgumentError("column map must name a text column");
  }
  if (const auto bad = FindInvalidUtf8(content)) {
    return absl::InvalidArgumentError(
        fmt::format("invalid UTF-8 at byte offset {}", *bad));
  }
  if (content.substr(0, 3) == "\xEF\xBB\xBF") content.remove_prefix(3);

  std::vector<RawRow> rows;
  switch (columns.format) {
    case ExportFormat::kJsonl: {
      ASSIGN_OR_RETURN(rows, ReadJsonlRows(content, columns));
      break;
    }
    case ExportFormat::kTsv: {
      ASSIGN_OR_RETURN(rows, ReadDelimitedRows(content, '\t', columns));
      break;
    }
    case ExportFormat::kCsv:
    case ExportFormat::kAuto: {
      ASSIGN_OR_RETURN(rows, ReadDelimitedRows(content, ',', columns));
      break;
    }
  }

  ExportReadResult result;
  result.report.input = rows.size();
  for (size_t i = 0; i < rows.size(); ++i) {
    RawRow& row = rows[i];
    if (IsBlank(row.text)) {
      ++result.report.rejected[std::string(kReasonEmpty)];
      continue;
    }
    Review review;
    review.id = row.id.empty()
                    ? SynthesizeId(platform, i + 1, row.content)
                    : fmt::format("{}-{}", PlatformName(platform), row.id);
    review.platform = platform;
    review.raw_text = std::move(row.text);
    if (!row.collected_at.empty()) review.collected_at = row.collected_at;
    if (!row.product_category.empty()) {
      review.product_category = row.product_category;
    }
    result.reviews.push_back(std::move(review));
  }
  result.report.accepted = result.reviews.size();
  return result;
}

absl::StatusOr<ExportReadResult> ReadPlatformExportFile(const std::string& path,
                                                        Platform platform,
                                                        ColumnMap columns) {
  ASSIGN_OR_RETURN(std::string content, ReadFile(path));
  if (columns.format == ExportFormat::kAuto) {
    columns.format = FormatFromPath(path);
  }
  auto result = ReadPlatformExport(content, platform, columns);
  if (!result.ok()) {
    return absl::Status(
        result.status().code(),
        fmt::format("{}: {}", path, std::string(result.status().message())));
  }
  return result;
}

absl::Status FilterPolicy::Validate() const {
  if (!(max_emoji_ratio >= 0.0 && max_emoji_ratio <= 1.0)) {
    return absl::InvalidArgumentError(fmt::format(
        "max_emoji_ratio must be in [0, 1], got {}", max_emoji_ratio));
  }
  if (min_word_count < 1) {
    return absl::InvalidArgumentError("min_word_count must be at least 1");
  }
  return absl::OkStatus();
}

double EmojiRatio(std::string_view raw_text) {
  const std::u32string text = DecodeUtf8Lossy(raw_text);
  const size_t emoji = CountEmoji(text);
  const size_t words = Preprocess(raw_text, {}, {}).size();
  if (emoji + words == 0) return 0.0;
  return static_cast<double>(emoji) / static_cast<double>(emoji + words);
}

std::u32string DedupeKey(std::string_view raw_text) {
  const std::u32string folded = FoldCase(ToNfc(DecodeUtf8Lossy(raw_text)));
  std::u32string key;
  bool pending_space = false;
  for (char32_t c : folded) {
    if (IsWhitespace(c)) {
      pending_space = !key.empty();
      continue;
    }
    if (pending_space) key.push_back(U' ');
    pending_space = false;
    key.push_back(c);
  }
  return key;
}

absl::StatusOr<ReviewFilter> ReviewFilter::Create(FilterPolicy policy) {
  RETURN_IF_ERROR(policy.Validate());
  std::vector<std::regex> patterns;
  for (const std::string& p : policy.blocked_patterns) {
    try {
      patterns.emplace_back(p, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
      return absl::InvalidArgumentError(
          fmt::format("invalid blocked pattern '{}': {}", p, e.what()));
    }
  }
  return ReviewFilter(std::move(policy), std::move(patterns));
}

FilterResult ReviewFilter::Apply(const std::vector<Review>& reviews) const {
  FilterResult result;
  result.report.input = reviews.size();
  std::set<std::u32string> seen;
  for (const Review& review : reviews) {
    std::string_view reason;
    for (const std::regex& pattern : patterns_) {
      if (std::regex_search(review.raw_text, pattern)) {
        reason = kReasonBlockedPattern;
        break;
      }
    }
    if (reason.empty() &&
        EmojiRatio(review.raw_text) > policy_.max_emoji_ratio) {
      reason = kReasonEmojiRatio;
    }
    if (reason.empty() &&
        Preprocess(review.raw_text, {}, {}).size() < policy_.min_word_count) {
      reason = kReasonWordCount;
    }
    if (reason.empty() && policy_.dedupe &&
        !seen.insert(DedupeKey(review.raw_text)).second) {
      reason = kReasonDuplicate;
    }
    if (reason.empty()) {
      result.kept.push_back(review);
      continue;
    }
    result.rejections.emplace_back(review.id, std::string(reason));
    if (reason == kReasonDuplicate) {
      ++result.report.duplicates_removed;
    } else {
      ++result.report.rejected[std::string(reason)];
    }
  }
  result.report.accepted = result.kept.size();
  return result;
}

absl::StatusOr<FilterResult> FilterReviews(const std::vector<Review>& reviews,
                                           const FilterPolicy& policy) {
  ASSIGN_OR_RETURN(ReviewFilter filter, ReviewFilter::Create(policy));
  return filter.Apply(reviews);
}

Corpus ToUnannotatedCorpus(const std::vector<Review>& reviews) {
  Corpus corpus;
  corpus.reserve(reviews.size());
  for (const Review& review : reviews) {
    corpus.push_back(AnnotatedReview{review, {}, std::nullopt});
  }
  return corpus;
}

}  // namespace aste

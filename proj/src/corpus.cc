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

#include "aste/corpus.h"

#include <algorithm>
#include <map>
#include <optional>
#include <regex>
#include <set>

#include "aste/file_util.h"
#include "aste/status_macros.h"
#include "aste/unicode.h"
#include "fmt/format.h"
#include "fmt/ranges.h"
#include "json.hpp"

namespace aste {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr std::array<std::string_view, 5> kPlatformNames = {
    "daraz", "facebook", "rokomari", "shajgoj", "other"};
constexpr std::array<std::string_view, 3> kPolarityNames = {
    "positive", "negative", "neutral"};

absl::Status FieldError(std::string_view context, std::string_view field,
                        std::string_view problem) {
  return absl::InvalidArgumentError(
      fmt::format("{}: field '{}' {}", context, field, problem));
}

absl::StatusOr<std::string> GetString(const json& obj, std::string_view field,
                                      std::string_view context) {
  const auto it = obj.find(field);
  if (it == obj.end()) return FieldError(context, field, "is missing");
  if (!it->is_string()) return FieldError(context, field, "must be a string");
  return it->get<std::string>();
}

absl::StatusOr<size_t> GetOffset(const json& obj, std::string_view field,
                                 std::string_view context) {
  const auto it = obj.find(field);
  if (it == obj.end()) return FieldError(context, field, "is missing");
  if (!it->is_number_unsigned()) {
    return FieldError(context, field, "must be a non-negative integer");
  }
  return it->get<size_t>();
}

absl::StatusOr<Span> ParseSpan(const json& obj, std::string_view field,
                               std::string_view context) {
  const auto it = obj.find(field);
  if (it == obj.end()) return FieldError(context, field, "is missing");
  if (!it->is_object()) return FieldError(context, field, "must be an object");
  const std::string where = fmt::format("{}.{}", context, field);
  Span span;
  ASSIGN_OR_RETURN(span.start, GetOffset(*it, "start", where));
  ASSIGN_OR_RETURN(span.end, GetOffset(*it, "end", where));
  return span;
}

absl::StatusOr<std::vector<Triplet>> ParseTriplets(const json& arr,
                                                   std::string_view context) {
  if (!arr.is_array()) {
    return absl::InvalidArgumentError(
        fmt::format("{}: must be an array", context));
  }
  std::vector<Triplet> out;
  for (size_t i = 0; i < arr.size(); ++i) {
    const std::string where = fmt::format("{}[{}]", context, i);
    const json& t = arr[i];
    if (!t.is_object()) {
      return absl::InvalidArgumentError(
          fmt::format("{}: must be an object", where));
    }
    Triplet triplet;
    ASSIGN_OR_RETURN(triplet.aspect, ParseSpan(t, "aspect", where));
    ASSIGN_OR_RETURN(triplet.opinion, ParseSpan(t, "opinion", where));
    ASSIGN_OR_RETURN(std::string polarity, GetString(t, "polarity", where));
    auto parsed = ParsePolarity(polarity);
    if (!parsed.ok()) {
      return FieldError(where, "polarity",
                        std::string(parsed.status().message()));
    }
    triplet.polarity = *parsed;
    if (const auto c = t.find("category"); c != t.end() && !c->is_null()) {
      if (!c->is_string()) {
        return FieldError(where, "category", "must be a string");
      }
      triplet.category = c->get<std::string>();
    }
    out.push_back(std::move(triplet));
  }
  return out;
}

absl::StatusOr<AnnotatedReview> ParseRecord(std::string_view line,
                                            std::string_view context,
                                            CorpusParseOptions options) {
  json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded() || !obj.is_object()) {
    return absl::InvalidArgumentError(
        fmt::format("{}: not a well-formed record object", context));
  }
  AnnotatedReview record;
  Review& review = record.review;
  ASSIGN_OR_RETURN(review.id, GetString(obj, "id", context));
  ASSIGN_OR_RETURN(std::string platform, GetString(obj, "platform", context));
  auto parsed_platform = ParsePlatform(platform);
  if (!parsed_platform.ok()) {
    return FieldError(context, "platform",
                      std::string(parsed_platform.status().message()));
  }
  review.platform = *parsed_platform;
  ASSIGN_OR_RETURN(review.raw_text, GetString(obj, "text", context));
  for (const char* optional_field : {"collected_at", "product_category"}) {
    const auto it = obj.find(optional_field);
    if (it == obj.end() || it->is_null()) continue;
    if (!it->is_string()) {
      return FieldError(context, optional_field, "must be a string");
    }
    (std::string_view(optional_field) == "collected_at"
         ? review.collected_at
         : review.product_category) = it->get<std::string>();
  }

  const auto annotations = obj.find("annotations");
  if (annotations == obj.end()) {
    return FieldError(context, "annotations", "is missing");
  }
  if (!annotations->is_array() ||
      (options.require_annotations && annotations->empty())) {
    return FieldError(context, "annotations", "must be a non-empty array");
  }
  for (size_t i = 0; i < annotations->size(); ++i) {
    const json& a = (*annotations)[i];
    const std::string where = fmt::format("{}: annotations[{}]", context, i);
    if (!a.is_object()) {
      return absl::InvalidArgumentError(
          fmt::format("{} must be an object", where));
    }
    AnnotationRecord annotation;
    ASSIGN_OR_RETURN(annotation.annotator_id, GetString(a, "annotator", where));
    const auto triplets = a.find("triplets");
    if (triplets == a.end()) return FieldError(where, "triplets", "is missing");
    ASSIGN_OR_RETURN(
        annotation.triplets,
        ParseTriplets(*triplets, fmt::format("{}.triplets", where)));
    record.annotations.push_back(std::move(annotation));
  }
  if (const auto gold = obj.find("gold");
      gold != obj.end() && !gold->is_null()) {
    ASSIGN_OR_RETURN(record.gold,
                     ParseTriplets(*gold, fmt::format("{}: gold", context)));
  }
  return record;
}

ordered_json SpanToJson(Span span) {
  ordered_json j;
  j["start"] = span.start;
  j["end"] = span.end;
  return j;
}

ordered_json TripletsToJson(const std::vector<Triplet>& triplets) {
  ordered_json arr = ordered_json::array();
  for (const Triplet& t : triplets) {
    ordered_json j;
    j["aspect"] = SpanToJson(t.aspect);
    j["opinion"] = SpanToJson(t.opinion);
    j["polarity"] = PolarityName(t.polarity);
    if (t.category) j["category"] = *t.category;
    arr.push_back(std::move(j));
  }
  return arr;
}

absl::Status ValidateSpan(const std::u32string& text, Span span,
                          std::string_view what) {
  if (span.start >= span.end || span.end > text.size()) {
    return absl::OutOfRangeError(
        fmt::format("{} span [{}, {}) out of bounds for text of length {}",
                    what, span.start, span.end, text.size()));
  }
  for (size_t i = span.start; i < span.end; ++i) {
    if (!IsWhitespace(text[i])) return absl::OkStatus();
  }
  return absl::InvalidArgumentError(fmt::format(
      "{} span [{}, {}) covers only whitespace", what, span.start, span.end));
}

absl::Status ValidateTriplets(const std::u32string& text,
                              const std::vector<Triplet>& triplets,
                              std::string_view what) {
  std::set<Triplet> seen;
  for (const Triplet& t : triplets) {
    RETURN_IF_ERROR(
        ValidateSpan(text, t.aspect, fmt::format("{} aspect", what)));
    RETURN_IF_ERROR(
        ValidateSpan(text, t.opinion, fmt::format("{} opinion", what)));
    if (!seen.insert(t).second) {
      return absl::InvalidArgumentError(
          fmt::format("{} contains a duplicate triplet", what));
    }
  }
  return absl::OkStatus();
}

bool SameSet(std::vector<Triplet> a, std::vector<Triplet> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

double SetF1(const std::set<Triplet>& a, const std::set<Triplet>& b) {
  if (a.empty() && b.empty()) return 1.0;
  size_t common = 0;
  for (const Triplet& t : a) common += b.count(t);
  if (common == 0) return 0.0;
  // With |A| as reference and |B| as prediction, F1 = 2|A∩B| / (|A| + |B|).
  return 2.0 * static_cast<double>(common) /
         static_cast<double>(a.size() + b.size());
}

absl::StatusOr<CategoryCounts> ParseCategoryCounts(const json& j,
                                                   std::string_view name) {
  if (!j.is_object()) {
    return absl::InvalidArgumentError(
        fmt::format("manifest category '{}' must be an object", name));
  }
  CategoryCounts counts;
  const std::string where = fmt::format("manifest category '{}'", name);
  ASSIGN_OR_RETURN(counts.total, GetOffset(j, "total", where));
  ASSIGN_OR_RETURN(counts.positive, GetOffset(j, "positive", where));
  ASSIGN_OR_RETURN(counts.negative, GetOffset(j, "negative", where));
  if (j.contains("neutral")) {
    ASSIGN_OR_RETURN(counts.neutral, GetOffset(j, "neutral", where));
  }
  return counts;
}

}  // namespace

std::string_view PlatformName(Platform platform) {
  return kPlatformNames[static_cast<size_t>(platform)];
}

absl::StatusOr<Platform> ParsePlatform(std::string_view name) {
  for (size_t i = 0; i < kPlatformNames.size(); ++i) {
    if (kPlatformNames[i] == name) return static_cast<Platform>(i);
  }
  return absl::InvalidArgumentError(
      fmt::format("unknown platform '{}'; expected one of {}", name,
                  fmt::join(kPlatformNames, ", ")));
}

std::string_view PolarityName(Polarity polarity) {
  return kPolarityNames[static_cast<size_t>(polarity)];
}

absl::StatusOr<Polarity> ParsePolarity(std::string_view name) {
  for (size_t i = 0; i < kPolarityNames.size(); ++i) {
    if (kPolarityNames[i] == name) return static_cast<Polarity>(i);
  }
  return absl::InvalidArgumentError(fmt::format("unknown polarity '{}'", name));
}

absl::Status CorpusStats::Validate() const {
  size_t sum = 0;
  for (const auto& [platform, count] : per_platform) sum += count;
  if (sum != total_reviews) {
    return absl::InternalError(
        fmt::format("total_reviews {} != platform sum {}", total_reviews, sum));
  }
  for (const auto& [category, c] : per_category) {
    if (c.total != c.positive + c.negative + c.neutral) {
      return absl::InternalError(fmt::format(
          "category '{}' total {} != polarity sum", category, c.total));
    }
  }
  return absl::OkStatus();
}

absl::Status ValidateAnnotatedReview(const AnnotatedReview& record,
                                     std::string_view context,
                                     CorpusParseOptions options) {
  const Review& review = record.review;
  const std::string where =
      context.empty() ? fmt::format("review '{}'", review.id)
                      : fmt::format("{}: review '{}'", context, review.id);
  if (review.id.empty()) {
    return absl::InvalidArgumentError(fmt::format("{}: empty id", where));
  }
  if (const auto bad = FindInvalidUtf8(review.raw_text)) {
    return absl::InvalidArgumentError(
        fmt::format("{}: invalid UTF-8 at byte offset {}", where, *bad));
  }
  const std::u32string text = DecodeUtf8Lossy(review.raw_text);
  if (ToNfc(text).empty()) {
    return absl::InvalidArgumentError(fmt::format("{}: empty text", where));
  }
  if (review.collected_at) {
    static const std::regex kIso8601(
        R"(\d{4}-\d{2}-\d{2}([T ]\d{2}:\d{2}(:\d{2}(\.\d+)?)?(Z|[+-]\d{2}:?\d{2})?)?)");
    if (!std::regex_match(*review.collected_at, kIso8601)) {
      return absl::InvalidArgumentError(
          fmt::format("{}: field 'collected_at' is not ISO-8601", where));
    }
  }
  if (options.require_annotations && record.annotations.empty()) {
    return absl::InvalidArgumentError(
        fmt::format("{}: no annotation records", where));
  }
  for (size_t i = 0; i < record.annotations.size(); ++i) {
    const AnnotationRecord& a = record.annotations[i];
    const std::string what = fmt::format("{}: annotations[{}]", where, i);
    if (a.annotator_id.empty()) {
      return absl::InvalidArgumentError(
          fmt::format("{}: empty annotator id", what));
    }
    RETURN_IF_ERROR(ValidateTriplets(text, a.triplets, what));
  }
  if (record.gold) {
    RETURN_IF_ERROR(
        ValidateTriplets(text, *record.gold, fmt::format("{}: gold", where)));
    std::vector<Triplet> expected;
    if (record.annotations.empty()) {
      return absl::InvalidArgumentError(
          fmt::format("{}: gold present without annotations", where));
    }
    if (record.annotations.size() == 1) {
      expected = record.annotations.front().triplets;
    } else {
      ASSIGN_OR_RETURN(Adjudication adj, Adjudicate(record.annotations));
      expected = std::move(adj.gold);
    }
    if (!SameSet(*record.gold, expected)) {
      return absl::InvalidArgumentError(fmt::format(
          "{}: gold does not match the majority vote of its annotations",
          where));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<Corpus> ParseCorpus(std::string_view content,
                                   CorpusParseOptions options) {
  Corpus corpus;
  std::set<std::string> ids;
  const auto lines = SplitLines(content);
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    const std::string context = fmt::format("line {}", i + 1);
    if (const auto bad = FindInvalidUtf8(line)) {
      return absl::InvalidArgumentError(
          fmt::format("{}: invalid UTF-8 at byte offset {}", context, *bad));
    }
    ASSIGN_OR_RETURN(AnnotatedReview record,
                     ParseRecord(line, context, options));
    RETURN_IF_ERROR(ValidateAnnotatedReview(record, context, options));
    if (!ids.insert(record.review.id).second) {
      return absl::InvalidArgumentError(fmt::format(
          "{}: duplicate review id '{}'", context, record.review.id));
    }
    corpus.push_back(std::move(record));
  }
  return corpus;
}

absl::StatusOr<Corpus> LoadCorpus(const std::string& path,
                                  CorpusParseOptions options) {
  ASSIGN_OR_RETURN(std::string content, ReadFile(path));
  auto corpus = ParseCorpus(content, options);
  if (!corpus.ok()) {
    return absl::Status(
        corpus.status().code(),
        fmt::format("{}: {}", path, std::string(corpus.status().message())));
  }
  return corpus;
}

std::string SerializeCorpus(const Corpus& corpus) {
  std::string out;
  for (const AnnotatedReview& record : corpus) {
    ordered_json j;
    j["id"] = record.review.id;
    j["platform"] = PlatformName(record.review.platform);
    j["text"] = record.review.raw_text;
    if (record.review.collected_at) {
      j["collected_at"] = *record.review.collected_at;
    }
    if (record.review.product_category) {
      j["product_category"] = *record.review.product_category;
    }
    ordered_json annotations = ordered_json::array();
    for (const AnnotationRecord& a : record.annotations) {
      ordered_json aj;
      aj["annotator"] = a.annotator_id;
      aj["triplets"] = TripletsToJson(a.triplets);
      annotations.push_back(std::move(aj));
    }
    j["annotations"] = std::move(annotations);
    if (record.gold) j["gold"] = TripletsToJson(*record.gold);
    out += j.dump();
    out += '\n';
  }
  return out;
}

absl::Status SaveCorpus(const Corpus& corpus, const std::string& path) {
  return WriteFile(path, SerializeCorpus(corpus));
}

absl::StatusOr<Adjudication> Adjudicate(
    std::span<const AnnotationRecord> annotations) {
  if (annotations.size() < 2) {
    return absl::FailedPreconditionError(fmt::format(
        "adjudication needs at least two annotation records, got {}",
        annotations.size()));
  }
  using Category = std::optional<std::string>;
  std::map<Triplet, std::map<Category, size_t>> votes;
  for (const AnnotationRecord& record : annotations) {
    // A record votes once per distinct triplet, with the smallest category
    // it gives that triplet.
    std::map<Triplet, Category> distinct;
    for (const Triplet& t : record.triplets) {
      auto [it, inserted] = distinct.emplace(t, t.category);
      if (!inserted && t.category < it->second) it->second = t.category;
    }
    for (const auto& [t, category] : distinct) ++votes[t][category];
  }
  Adjudication result;
  for (const auto& [key, categories] : votes) {
    Triplet triplet = key;
    size_t count = 0;
    size_t best = 0;
    for (const auto& [category, n] : categories) {
      count += n;
      // Most-voted category; ties go to the smallest.
      if (n > best) {
        best = n;
        triplet.category = category;
      }
    }
    if (2 * count > annotations.size()) {
      result.gold.push_back(triplet);
    } else {
      result.conflicts.push_back(triplet);
    }
  }
  return result;
}

absl::StatusOr<double> Agreement(
    std::span<const AnnotationRecord> annotations) {
  if (annotations.size() < 2) {
    return absl::FailedPreconditionError(
        "agreement needs at least two annotation records");
  }
  std::vector<std::set<Triplet>> sets;
  for (const AnnotationRecord& r : annotations) {
    sets.emplace_back(r.triplets.begin(), r.triplets.end());
  }
  double sum = 0.0;
  size_t pairs = 0;
  for (size_t i = 0; i < sets.size(); ++i) {
    for (size_t j = i + 1; j < sets.size(); ++j) {
      sum += SetF1(sets[i], sets[j]);
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

size_t AdjudicateCorpus(Corpus& corpus) {
  size_t conflicts = 0;
  for (AnnotatedReview& record : corpus) {
    if (record.annotations.size() == 1) {
      std::vector<Triplet> gold = record.annotations.front().triplets;
      std::sort(gold.begin(), gold.end());
      record.gold = std::move(gold);
      continue;
    }
    auto adj = Adjudicate(record.annotations);
    if (!adj.ok()) continue;  // unannotated records stay without gold
    conflicts += adj->conflicts.size();
    record.gold = std::move(adj->gold);
  }
  return conflicts;
}

absl::StatusOr<CorpusStats> ComputeCorpusStats(const Corpus& corpus) {
  std::vector<std::string> unadjudicated;
  CorpusStats stats;
  for (Platform p : kAllPlatforms) stats.per_platform[p] = 0;
  for (const AnnotatedReview& record : corpus) {
    if (!record.gold) {
      unadjudicated.push_back(record.review.id);
      continue;
    }
    ++stats.total_reviews;
    ++stats.per_platform[record.review.platform];
    for (const Triplet& t : *record.gold) {
      CategoryCounts& c =
          stats.per_category[t.category.value_or(std::string(kUncategorized))];
      ++c.total;
      switch (t.polarity) {
        case Polarity::kPositive:
          ++c.positive;
          break;
        case Polarity::kNegative:
          ++c.negative;
          break;
        case Polarity::kNeutral:
          ++c.neutral;
          break;
      }
    }
  }
  if (!unadjudicated.empty()) {
    return absl::FailedPreconditionError(
        fmt::format("reviews without adjudicated gold: {}",
                    fmt::join(unadjudicated, ", ")));
  }
  RETURN_IF_ERROR(stats.Validate());
  return stats;
}

absl::StatusOr<CorpusManifest> ParseManifest(std::string_view content) {
  const json j = json::parse(content, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("manifest is not a well-formed object");
  }
  CorpusManifest manifest;
  if (j.contains("total_reviews")) {
    ASSIGN_OR_RETURN(manifest.total_reviews,
                     GetOffset(j, "total_reviews", "manifest"));
  }
  if (const auto it = j.find("per_platform"); it != j.end()) {
    if (!it->is_object()) {
      return FieldError("manifest", "per_platform", "must be an object");
    }
    for (const auto& [name, count] : it->items()) {
      ASSIGN_OR_RETURN(Platform p, ParsePlatform(name));
      if (!count.is_number_unsigned()) {
        return FieldError("manifest", fmt::format("per_platform.{}", name),
                          "must be a non-negative integer");
      }
      manifest.per_platform[p] = count.get<size_t>();
    }
  }
  if (const auto it = j.find("per_category"); it != j.end()) {
    if (!it->is_object()) {
      return FieldError("manifest", "per_category", "must be an object");
    }
    for (const auto& [name, counts] : it->items()) {
      ASSIGN_OR_RETURN(manifest.per_category[name],
                       ParseCategoryCounts(counts, name));
    }
  }
  return manifest;
}

absl::StatusOr<CorpusManifest> LoadManifest(const std::string& path) {
  ASSIGN_OR_RETURN(std::string content, ReadFile(path));
  return ParseManifest(content);
}

std::string SerializeManifest(const CorpusManifest& manifest) {
  ordered_json j;
  if (manifest.total_reviews) j["total_reviews"] = *manifest.total_reviews;
  ordered_json platforms = ordered_json::object();
  for (const auto& [p, count] : manifest.per_platform) {
    platforms[std::string(PlatformName(p))] = count;
  }
  j["per_platform"] = std::move(platforms);
  ordered_json categories = ordered_json::object();
  for (const auto& [name, c] : manifest.per_category) {
    categories[name] = {{"total", c.total},
                        {"positive", c.positive},
                        {"negative", c.negative},
                        {"neutral", c.neutral}};
  }
  j["per_category"] = std::move(categories);
  return j.dump(2) + "\n";
}

CorpusManifest ManifestFromStats(const CorpusStats& stats) {
  CorpusManifest m;
  m.total_reviews = stats.total_reviews;
  m.per_platform = stats.per_platform;
  m.per_category = stats.per_category;
  return m;
}

std::string RenderCorpusStats(const CorpusStats& stats) {
  size_t width = std::string_view("Category").size();
  for (const auto& [name, c] : stats.per_category) {
    width = std::max(width, CodePointLength(name));
  }
  std::string out = fmt::format("{:<{}} {:>8}\n", "Platform", width, "Reviews");
  for (Platform p : kAllPlatforms) {
    const auto it = stats.per_platform.find(p);
    out += fmt::format("{:<{}} {:>8}\n", PlatformName(p), width,
                       it == stats.per_platform.end() ? 0 : it->second);
  }
  out += fmt::format("{:<{}} {:>8}\n\n", "Total", width, stats.total_reviews);
  out += fmt::format("{:<{}} {:>8} {:>8} {:>8} {:>8}\n", "Category", width,
                     "Positive", "Negative", "Neutral", "Total");
  for (const auto& [name, c] : stats.per_category) {
    out += fmt::format("{}{} {:>8} {:>8} {:>8} {:>8}\n", name,
                       std::string(width - CodePointLength(name), ' '),
                       c.positive, c.negative, c.neutral, c.total);
  }
  return out;
}

absl::Status CheckManifest(const CorpusStats& stats,
                           const CorpusManifest& manifest) {
  std::vector<std::string> mismatches;
  if (manifest.total_reviews &&
      *manifest.total_reviews != stats.total_reviews) {
    mismatches.push_back(fmt::format("total_reviews expected {} got {}",
                                     *manifest.total_reviews,
                                     stats.total_reviews));
  }
  for (const auto& [p, expected] : manifest.per_platform) {
    const auto it = stats.per_platform.find(p);
    const size_t got = it == stats.per_platform.end() ? 0 : it->second;
    if (got != expected) {
      mismatches.push_back(
          fmt::format("{} expected {} got {}", PlatformName(p), expected, got));
    }
  }
  for (const auto& [name, expected] : manifest.per_category) {
    const auto it = stats.per_category.find(name);
    const CategoryCounts got =
        it == stats.per_category.end() ? CategoryCounts{} : it->second;
    if (!(got == expected)) {
      mismatches.push_back(
          fmt::format("category '{}' expected {}/{}/{}/{} got {}/{}/{}/{}",
                      name, expected.total, expected.positive,
                      expected.negative, expected.neutral, got.total,
                      got.positive, got.negative, got.neutral));
    }
  }
  if (!mismatches.empty()) {
    return absl::FailedPreconditionError(fmt::format(
        "corpus does not match manifest: {}", fmt::join(mismatches, "; ")));
  }
  return absl::OkStatus();
}

std::string SpanText(const Review& review, Span span) {
  const std::u32string text = DecodeUtf8Lossy(review.raw_text);
  if (span.start >= text.size() || span.end > text.size()) return {};
  return EncodeUtf8(
      std::u32string_view(text).substr(span.start, span.end - span.start));
}

}  // namespace aste

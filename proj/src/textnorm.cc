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

#include "aste/textnorm.h"

#include <algorithm>

#include "absl/status/status.h"
#include "aste/file_util.h"
#include "aste/status_macros.h"
#include "aste/unicode.h"
#include "fmt/format.h"

namespace aste {
namespace {

// Marks which raw code points survive normalization.
std::vector<bool> ClassifyKept(std::u32string_view raw) {
  std::vector<bool> kept(raw.size(), false);
  bool prev_kept = false;
  for (size_t i = 0; i < raw.size(); ++i) {
    const char32_t c = raw[i];
    bool keep = false;
    if (IsBaseChar(c)) {
      keep = true;
    } else if (IsDependentChar(c)) {
      keep = prev_kept;
    }
    kept[i] = keep;
    prev_kept = keep;
  }
  return kept;
}

// Returns the text if it is a single normalized token, i.e. normalization
// leaves it unchanged and it contains no separator.
absl::StatusOr<std::u32string> NormalizedSingleToken(std::string_view utf8,
                                                     std::string_view what) {
  ASSIGN_OR_RETURN(std::u32string decoded, DecodeUtf8(utf8));
  const std::u32string nfc = ToNfc(decoded);
  const NormalizedText norm = Normalize(std::u32string_view(nfc), {});
  if (nfc.empty() || norm.text != nfc ||
      nfc.find(U' ') != std::u32string::npos) {
    return absl::InvalidArgumentError(
        fmt::format("{} '{}' is not a single normalized token", what, utf8));
  }
  return nfc;
}

}  // namespace

OffsetMap::OffsetMap(std::vector<std::pair<size_t, size_t>> anchors,
                     size_t raw_length, size_t leading_trim,
                     size_t trailing_trim)
    : anchors_(std::move(anchors)),
      raw_length_(raw_length),
      leading_trim_(leading_trim),
      trailing_trim_(trailing_trim) {
  if (anchors_.empty()) anchors_.push_back({0, 0});
}

OffsetMap OffsetMap::Identity(size_t length) {
  std::vector<std::pair<size_t, size_t>> anchors;
  anchors.reserve(length + 1);
  for (size_t i = 0; i <= length; ++i) anchors.push_back({i, i});
  return OffsetMap(std::move(anchors), length, 0, 0);
}

bool OffsetMap::IsIdentity() const {
  if (leading_trim_ != 0 || trailing_trim_ != 0) return false;
  if (raw_length_ != normalized_length()) return false;
  return std::all_of(anchors_.begin(), anchors_.end(),
                     [](const auto& a) { return a.first == a.second; });
}

absl::Status OffsetMap::Validate() const {
  if (anchors_.front() != std::pair<size_t, size_t>{0, 0}) {
    return absl::InternalError("offset map must start at (0, 0)");
  }
  for (size_t i = 1; i < anchors_.size(); ++i) {
    if (anchors_[i].first <= anchors_[i - 1].first ||
        anchors_[i].second <= anchors_[i - 1].second) {
      return absl::InternalError(
          fmt::format("offset map anchors not strictly increasing at {}", i));
    }
  }
  if (normalized_length() > 0 && anchors_.back().second != raw_length_) {
    return absl::InternalError("offset map does not cover the raw text");
  }
  if (leading_trim_ + trailing_trim_ > raw_length_) {
    return absl::InternalError("offset map trims exceed raw length");
  }
  return absl::OkStatus();
}

absl::StatusOr<SpellingLexicon> SpellingLexicon::FromEntries(
    const std::vector<std::pair<std::string, std::string>>& entries) {
  SpellingLexicon lexicon;
  for (const auto& [variant_utf8, canonical_utf8] : entries) {
    ASSIGN_OR_RETURN(std::u32string variant,
                     NormalizedSingleToken(variant_utf8, "spelling variant"));
    ASSIGN_OR_RETURN(
        std::u32string canonical,
        NormalizedSingleToken(canonical_utf8, "canonical spelling"));
    if (variant == canonical) continue;
    auto [it, inserted] = lexicon.entries_.emplace(variant, canonical);
    if (!inserted && it->second != canonical) {
      return absl::InvalidArgumentError(fmt::format(
          "spelling variant '{}' has two canonical forms", variant_utf8));
    }
  }
  for (const auto& [variant, canonical] : lexicon.entries_) {
    if (lexicon.entries_.count(canonical) > 0) {
      return absl::InvalidArgumentError(fmt::format(
          "spelling lexicon chains '{}' -> '{}' -> '{}'", EncodeUtf8(variant),
          EncodeUtf8(canonical), EncodeUtf8(lexicon.entries_.at(canonical))));
    }
  }
  return lexicon;
}

absl::StatusOr<SpellingLexicon> SpellingLexicon::Parse(
    std::string_view content) {
  std::vector<std::pair<std::string, std::string>> entries;
  const auto lines = SplitLines(content);
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (line.empty() || line.front() == '#') continue;
    const size_t tab = line.find('\t');
    if (tab == std::string_view::npos ||
        line.find('\t', tab + 1) != std::string_view::npos) {
      return absl::InvalidArgumentError(fmt::format(
          "spelling lexicon line {}: expected variant<TAB>canonical", i + 1));
    }
    entries.emplace_back(std::string(line.substr(0, tab)),
                         std::string(line.substr(tab + 1)));
  }
  return FromEntries(entries);
}

absl::StatusOr<SpellingLexicon> SpellingLexicon::Load(const std::string& path) {
  ASSIGN_OR_RETURN(std::string content, ReadFile(path));
  auto lexicon = Parse(content);
  if (!lexicon.ok()) {
    return absl::InvalidArgumentError(
        fmt::format("{}: {}", path, std::string(lexicon.status().message())));
  }
  return lexicon;
}

const std::u32string* SpellingLexicon::Find(const std::u32string& token) const {
  const auto it = entries_.find(token);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::pair<std::string, std::string>> SpellingLexicon::Entries()
    const {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(entries_.size());
  for (const auto& [variant, canonical] : entries_) {
    out.emplace_back(EncodeUtf8(variant), EncodeUtf8(canonical));
  }
  return out;
}

StopwordSet::StopwordSet(const std::vector<std::string>& words) {
  for (const std::string& w : words) {
    const std::u32string nfc = ToNfc(DecodeUtf8Lossy(w));
    if (!nfc.empty()) words_.insert(nfc);
  }
}

absl::StatusOr<StopwordSet> StopwordSet::Parse(std::string_view content) {
  if (const auto bad = FindInvalidUtf8(content)) {
    return absl::InvalidArgumentError(
        fmt::format("stopword list: invalid UTF-8 at byte offset {}", *bad));
  }
  std::vector<std::string> words;
  for (std::string_view line : SplitLines(content)) {
    line = StripWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    words.emplace_back(line);
  }
  return StopwordSet(words);
}

absl::StatusOr<StopwordSet> StopwordSet::Load(const std::string& path) {
  ASSIGN_OR_RETURN(std::string content, ReadFile(path));
  return Parse(content);
}

std::vector<std::string> StopwordSet::Words() const {
  std::vector<std::string> out;
  out.reserve(words_.size());
  for (const auto& w : words_) out.push_back(EncodeUtf8(w));
  return out;
}

std::string TokenizedText::TokenText(size_t i) const {
  return EncodeUtf8(TokenView(i));
}

NormalizedText Normalize(std::u32string_view raw,
                         const SpellingLexicon& lexicon) {
  const std::vector<bool> kept = ClassifyKept(raw);

  std::vector<CharRange> words;
  for (size_t i = 0; i < raw.size();) {
    if (!kept[i]) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < raw.size() && kept[j]) ++j;
    words.push_back({i, j});
    i = j;
  }

  NormalizedText result;
  if (words.empty()) {
    result.offset_map = OffsetMap({{0, 0}}, raw.size(), raw.size(), 0);
    return result;
  }

  std::u32string& out = result.text;
  std::vector<std::pair<size_t, size_t>> anchors;
  for (size_t w = 0; w < words.size(); ++w) {
    const CharRange word = words[w];
    if (w > 0) {
      anchors.push_back({out.size(), words[w - 1].end});
      out.push_back(U' ');
    }
    // Split the word where NFC cannot interact across the cut, so each
    // piece composes independently and keeps its own raw anchor.
    std::vector<size_t> cuts = {word.start};
    for (size_t i = word.start + 1; i < word.end; ++i) {
      if (HasNfcBoundaryBefore(raw[i])) cuts.push_back(i);
    }
    cuts.push_back(word.end);

    std::vector<std::u32string> pieces;
    std::u32string composed;
    for (size_t p = 0; p + 1 < cuts.size(); ++p) {
      pieces.push_back(ToNfc(raw.substr(cuts[p], cuts[p + 1] - cuts[p])));
      composed += pieces.back();
    }
    const size_t first_raw = w == 0 ? 0 : word.start;
    if (const std::u32string* canonical = lexicon.Find(composed)) {
      anchors.push_back({out.size(), first_raw});
      out += *canonical;
      continue;
    }
    for (size_t p = 0; p < pieces.size(); ++p) {
      anchors.push_back({out.size(), p == 0 ? first_raw : cuts[p]});
      out += pieces[p];
    }
  }
  anchors.push_back({out.size(), raw.size()});
  result.offset_map =
      OffsetMap(std::move(anchors), raw.size(), words.front().start,
                raw.size() - words.back().end);
  return result;
}

NormalizedText Normalize(std::string_view raw_utf8,
                         const SpellingLexicon& lexicon) {
  return Normalize(std::u32string_view(DecodeUtf8Lossy(raw_utf8)), lexicon);
}

TokenizedText Tokenize(NormalizedText normalized,
                       const StopwordSet& stopwords) {
  TokenizedText out;
  out.normalized = std::move(normalized.text);
  out.offset_map = std::move(normalized.offset_map);
  const std::u32string& s = out.normalized;
  for (size_t i = 0; i < s.size();) {
    if (IsWhitespace(s[i])) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < s.size() && !IsWhitespace(s[j])) ++j;
    Token token{i, j, false};
    token.is_stopword = stopwords.Contains(s.substr(i, j - i));
    out.tokens.push_back(token);
    i = j;
  }
  return out;
}

TokenizedText Preprocess(std::string_view raw_utf8,
                         const SpellingLexicon& lexicon,
                         const StopwordSet& stopwords) {
  return Tokenize(Normalize(raw_utf8, lexicon), stopwords);
}

absl::StatusOr<CharRange> MapSpan(const OffsetMap& map, CharRange normalized) {
  if (normalized.start >= normalized.end ||
      normalized.end > map.normalized_length()) {
    return absl::OutOfRangeError(
        fmt::format("span [{}, {}) outside normalized text of length {}",
                    normalized.start, normalized.end, map.normalized_length()));
  }
  const auto& anchors = map.anchors();
  // Last anchor whose normalized offset is <= start.
  const auto floor = std::prev(
      std::upper_bound(anchors.begin(), anchors.end(), normalized.start,
                       [](size_t v, const auto& a) { return v < a.first; }));
  // First anchor whose normalized offset is >= end.
  const auto ceil =
      std::lower_bound(anchors.begin(), anchors.end(), normalized.end,
                       [](const auto& a, size_t v) { return a.first < v; });

  CharRange raw{floor->second, ceil->second};
  if (floor == anchors.begin()) raw.start = map.leading_trim();
  if (std::next(ceil) == anchors.end()) raw.end -= map.trailing_trim();
  return raw;
}

}  // namespace aste

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

#ifndef ASTE_TEXTNORM_H_
#define ASTE_TEXTNORM_H_

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"

namespace aste {

// Half-open [start, end) interval of code point offsets.
struct CharRange {
  size_t start = 0;
  size_t end = 0;

  size_t size() const { return end - start; }
  friend bool operator==(const CharRange&, const CharRange&) = default;
  friend auto operator<=>(const CharRange&, const CharRange&) = default;
};

// Alignment between normalized text and the raw text it came from.
//
// The map is a list of anchors (normalized_offset, raw_offset), strictly
// increasing in both coordinates, that delimit segments: the normalized
// characters [n_i, n_{i+1}) were produced by exactly the raw characters
// [r_i, r_{i+1}). The first anchor is (0, 0) and the last one covers the full
// normalized and raw lengths. Separator runs before the first and after the
// last word produce no output; they are folded into the outermost segments
// and recorded as `leading_trim` / `trailing_trim` so that mapped spans can
// be tightened to the characters that actually produced them.
class OffsetMap {
 public:
  OffsetMap() = default;
  OffsetMap(std::vector<std::pair<size_t, size_t>> anchors, size_t raw_length,
            size_t leading_trim, size_t trailing_trim);

  static OffsetMap Identity(size_t length);

  const std::vector<std::pair<size_t, size_t>>& anchors() const {
    return anchors_;
  }
  size_t normalized_length() const { return anchors_.back().first; }
  size_t raw_length() const { return raw_length_; }
  size_t leading_trim() const { return leading_trim_; }
  size_t trailing_trim() const { return trailing_trim_; }

  bool IsIdentity() const;

  // Checks the anchor invariants.
  absl::Status Validate() const;

  friend bool operator==(const OffsetMap&, const OffsetMap&) = default;

 private:
  std::vector<std::pair<size_t, size_t>> anchors_ = {{0, 0}};
  size_t raw_length_ = 0;
  size_t leading_trim_ = 0;
  size_t trailing_trim_ = 0;
};

// Whole-token spelling rewrites, variant -> canonical. Keys and values are
// stored in NFC. A canonical form is never itself a variant.
class SpellingLexicon {
 public:
  SpellingLexicon() = default;

  static absl::StatusOr<SpellingLexicon> FromEntries(
      const std::vector<std::pair<std::string, std::string>>& entries);

  // Tab-separated "variant<TAB>canonical" lines; blank lines and lines
  // starting with '#' are skipped.
  static absl::StatusOr<SpellingLexicon> Parse(std::string_view content);
  static absl::StatusOr<SpellingLexicon> Load(const std::string& path);

  const std::u32string* Find(const std::u32string& token) const;
  bool empty() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }

  // UTF-8 (variant, canonical) pairs in key order.
  std::vector<std::pair<std::string, std::string>> Entries() const;

 private:
  std::map<std::u32string, std::u32string> entries_;
};

// Stopwords in NFC. Matching is exact on normalized tokens.
class StopwordSet {
 public:
  StopwordSet() = default;
  explicit StopwordSet(const std::vector<std::string>& words);

  // One word per line; blank lines and '#' comments are skipped.
  static absl::StatusOr<StopwordSet> Parse(std::string_view content);
  static absl::StatusOr<StopwordSet> Load(const std::string& path);

  bool Contains(const std::u32string& token) const {
    return words_.count(token) > 0;
  }
  bool empty() const { return words_.empty(); }
  std::vector<std::string> Words() const;

 private:
  std::set<std::u32string> words_;
};

struct NormalizedText {
  std::u32string text;
  OffsetMap offset_map;
};

struct Token {
  size_t start = 0;
  size_t end = 0;
  bool is_stopword = false;

  friend bool operator==(const Token&, const Token&) = default;
};

struct TokenizedText {
  std::u32string normalized;
  std::vector<Token> tokens;
  OffsetMap offset_map;

  size_t size() const { return tokens.size(); }
  std::u32string_view TokenView(size_t i) const {
    return std::u32string_view(normalized)
        .substr(tokens[i].start, tokens[i].end - tokens[i].start);
  }
  std::string TokenText(size_t i) const;
  // Normalized range covered by tokens [first, last].
  CharRange TokenRange(size_t first, size_t last) const {
    return {tokens[first].start, tokens[last].end};
  }
};

// NFC-composes the text, replaces punctuation, symbols, emoji and other
// non-word code points with separators, collapses separator runs into single
// spaces, trims both ends and applies whole-token spelling rewrites.
// Combining marks that are not attached to a letter or digit are dropped
// along with the separator run they follow.
NormalizedText Normalize(std::u32string_view raw,
                         const SpellingLexicon& lexicon);
NormalizedText Normalize(std::string_view raw_utf8,
                         const SpellingLexicon& lexicon);

// Splits normalized text on whitespace and flags stopwords. Normalize never
// emits whitespace inside a combining sequence, so tokens always begin and
// end on grapheme cluster boundaries.
TokenizedText Tokenize(NormalizedText normalized, const StopwordSet& stopwords);

// Normalize + Tokenize.
TokenizedText Preprocess(std::string_view raw_utf8,
                         const SpellingLexicon& lexicon,
                         const StopwordSet& stopwords);

// Maps a normalized span to the raw span that produced it. For spans that
// begin and end on non-space characters, the raw substring normalizes back
// to the normalized substring. Spans cutting through a segment are widened
// to the segment edges.
absl::StatusOr<CharRange> MapSpan(const OffsetMap& map, CharRange normalized);

}  // namespace aste

#endif  // ASTE_TEXTNORM_H_

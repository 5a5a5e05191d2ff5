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

#ifndef ASTE_UNICODE_H_
#define ASTE_UNICODE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"

namespace aste {

// Offsets throughout the toolkit count Unicode code points, never bytes.

// Byte offset of the first ill-formed UTF-8 sequence, if any.
std::optional<size_t> FindInvalidUtf8(std::string_view bytes);

absl::StatusOr<std::u32string> DecodeUtf8(std::string_view bytes);

// Decodes input already known to be valid; ill-formed bytes become U+FFFD.
std::u32string DecodeUtf8Lossy(std::string_view bytes);

std::string EncodeUtf8(std::u32string_view text);

// Number of code points in a valid UTF-8 string.
size_t CodePointLength(std::string_view bytes);

// Canonical composition (NFC).
std::u32string ToNfc(std::u32string_view text);

// True if NFC never interacts across a boundary placed before `c`.
bool HasNfcBoundaryBefore(char32_t c);

bool IsWhitespace(char32_t c);

// Pictographic emoji, regional indicators and emoji modifiers.
bool IsEmoji(char32_t c);

// Emoji code points in a text: pictographs and regional indicators. Skin
// tone modifiers, joiners and variation selectors are not counted.
size_t CountEmoji(std::u32string_view text);

// Letters and numbers.
bool IsBaseChar(char32_t c);

// Combining marks plus ZERO WIDTH (NON-)JOINER. They only survive
// normalization when attached to a preceding base character.
bool IsDependentChar(char32_t c);

// Simple case folding, used for duplicate detection.
std::u32string FoldCase(std::u32string_view text);

}  // namespace aste

#endif  // ASTE_UNICODE_H_

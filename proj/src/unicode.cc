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

#include "aste/unicode.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "absl/status/status.h"
#include "fmt/format.h"

namespace aste {
namespace {

constexpr char32_t kReplacement = 0xFFFD;

// Decodes one code point starting at `pos`. Returns the sequence length, or 0
// if the sequence is ill-formed.
size_t DecodeOne(std::string_view s, size_t pos, char32_t* out) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) {
    *out = b0;
    return 1;
  }
  size_t len;
  char32_t cp;
  char32_t min;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2, cp = b0 & 0x1F, min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3, cp = b0 & 0x0F, min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4, cp = b0 & 0x07, min = 0x10000;
  } else {
    return 0;
  }
  if (pos + len > s.size()) return 0;
  for (size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return 0;
  *out = cp;
  return len;
}

const icu::Normalizer2& Nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  // The NFC data is compiled into libicudata; failure here means a broken
  // installation.
  if (U_FAILURE(status) || nfc == nullptr) std::abort();
  return *nfc;
}

}  // namespace

std::optional<size_t> FindInvalidUtf8(std::string_view bytes) {
  size_t pos = 0;
  while (pos < bytes.size()) {
    char32_t cp;
    const size_t len = DecodeOne(bytes, pos, &cp);
    if (len == 0) return pos;
    pos += len;
  }
  return std::nullopt;
}

absl::StatusOr<std::u32string> DecodeUtf8(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  size_t pos = 0;
  while (pos < bytes.size()) {
    char32_t cp;
    const size_t len = DecodeOne(bytes, pos, &cp);
    if (len == 0) {
      return absl::InvalidArgumentError(
          fmt::format("invalid UTF-8 at byte offset {}", pos));
    }
    out.push_back(cp);
    pos += len;
  }
  return out;
}

std::u32string DecodeUtf8Lossy(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  size_t pos = 0;
  while (pos < bytes.size()) {
    char32_t cp;
    const size_t len = DecodeOne(bytes, pos, &cp);
    if (len == 0) {
      out.push_back(kReplacement);
      ++pos;
    } else {
      out.push_back(cp);
      pos += len;
    }
  }
  return out;
}

std::string EncodeUtf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size() * 3);
  for (char32_t c : text) {
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (c >> 12)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (c >> 18)));
      out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
  }
  return out;
}

size_t CodePointLength(std::string_view bytes) {
  size_t n = 0;
  for (char b : bytes) {
    if ((static_cast<unsigned char>(b) & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::u32string ToNfc(std::u32string_view text) {
  if (text.empty()) return {};
  const icu::UnicodeString in = icu::UnicodeString::fromUTF32(
      reinterpret_cast<const UChar32*>(text.data()),
      static_cast<int32_t>(text.size()));
  UErrorCode status = U_ZERO_ERROR;
  const icu::UnicodeString out = Nfc().normalize(in, status);
  if (U_FAILURE(status)) return std::u32string(text);
  std::u32string result(static_cast<size_t>(out.countChar32()), U'\0');
  status = U_ZERO_ERROR;
  out.toUTF32(reinterpret_cast<UChar32*>(result.data()),
              static_cast<int32_t>(result.size()), status);
  return result;
}

bool HasNfcBoundaryBefore(char32_t c) {
  return Nfc().hasBoundaryBefore(static_cast<UChar32>(c));
}

bool IsWhitespace(char32_t c) {
  return u_hasBinaryProperty(static_cast<UChar32>(c), UCHAR_WHITE_SPACE);
}

bool IsEmoji(char32_t c) {
  const auto cp = static_cast<UChar32>(c);
  if (c < 0x80) return false;
  return u_hasBinaryProperty(cp, UCHAR_EXTENDED_PICTOGRAPHIC) ||
         u_hasBinaryProperty(cp, UCHAR_REGIONAL_INDICATOR) ||
         u_hasBinaryProperty(cp, UCHAR_EMOJI_MODIFIER);
}

size_t CountEmoji(std::u32string_view text) {
  size_t n = 0;
  for (char32_t c : text) {
    const auto cp = static_cast<UChar32>(c);
    if (c >= 0x80 && (u_hasBinaryProperty(cp, UCHAR_EXTENDED_PICTOGRAPHIC) ||
                      u_hasBinaryProperty(cp, UCHAR_REGIONAL_INDICATOR))) {
      ++n;
    }
  }
  return n;
}

bool IsBaseChar(char32_t c) {
  const auto mask = U_GET_GC_MASK(static_cast<UChar32>(c));
  return (mask & (U_GC_L_MASK | U_GC_N_MASK)) != 0 && !IsEmoji(c);
}

bool IsDependentChar(char32_t c) {
  if (c == 0x200C || c == 0x200D) return true;
  if (c == 0xFE0F || c == 0xFE0E) return false;  // emoji variation selectors
  return (U_GET_GC_MASK(static_cast<UChar32>(c)) & U_GC_M_MASK) != 0;
}

std::u32string FoldCase(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    out.push_back(static_cast<char32_t>(
        u_foldCase(static_cast<UChar32>(c), U_FOLD_CASE_DEFAULT)));
  }
  return out;
}

}  // namespace aste

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

#ifndef ASTE_TESTS_TEST_UTIL_H_
#define ASTE_TESTS_TEST_UTIL_H_

#include <random>
#include <string>

#include "gtest/gtest.h"

#define ASSERT_OK(expr)         \
  do {                          \
    const auto& _s = (expr);    \
    ASSERT_TRUE(_s.ok()) << _s; \
  } while (0)

#define EXPECT_OK(expr)         \
  do {                          \
    const auto& _s = (expr);    \
    EXPECT_TRUE(_s.ok()) << _s; \
  } while (0)

namespace aste::testing {

// Random text over the Bengali block mixed with punctuation, whitespace and
// emoji (including ZWJ sequences and variation selectors).
inline std::u32string RandomNoisyBangla(std::mt19937_64& rng, size_t length) {
  static const std::u32string kNoise =
      U" \t\n,.!?।॥-\"'()[]/:;*#@%&+=~"
      U" —…"
      U"\U0001F600\U0001F621❤\uFE0F\u200D\U0001F44D\U0001F3FD";
  std::u32string out;
  std::uniform_int_distribution<int> kind(0, 9);
  std::uniform_int_distribution<int> bangla(0x0980, 0x09FE);
  std::uniform_int_distribution<size_t> noise(0, kNoise.size() - 1);
  for (size_t i = 0; i < length; ++i) {
    const int k = kind(rng);
    if (k < 7) {
      out.push_back(static_cast<char32_t>(bangla(rng)));
    } else if (k == 7) {
      out.push_back(U' ');
    } else {
      out.push_back(kNoise[noise(rng)]);
    }
  }
  return out;
}

}  // namespace aste::testing

#endif  // ASTE_TESTS_TEST_UTIL_H_

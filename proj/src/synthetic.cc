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

#include "aste/synthetic.h"

#include <algorithm>
#include <array>
#include <iterator>
#include <random>

#include "aste/unicode.h"
#include "fmt/format.h"

namespace aste {
namespace {

class Builder {
 public:
  Span Append(std::string_view utf8) {
    const size_t start = length_;
    text_ += utf8;
    length_ += CodePointLength(utf8);
    return {start, length_};
  }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
  size_t length_ = 0;
};

}  // namespace

std::vector<std::string> SyntheticLexicon::AspectTerms() const {
  std::vector<std::string> out;
  for (const auto& [term, category] : aspects) out.push_back(term);
  return out;
}

std::vector<std::string> SyntheticLexicon::OpinionTerms() const {
  std::vector<std::string> out;
  for (const auto& group : opinions) {
    out.insert(out.end(), group.begin(), group.end());
  }
  return out;
}

const SyntheticLexicon& DefaultSyntheticLexicon() {
  static const SyntheticLexicon* lexicon = new SyntheticLexicon{
      {{"ব্যাটারি", "Battery Life"},
       {"চার্জ", "Battery Life"},
       {"ব্যাটারি লাইফ", "Battery Life"},
       {"ক্যামেরা", "Camera Quality"},
       {"ছবির মান", "Camera Quality"},
       {"লেন্স", "Camera Quality"},
       {"ডেলিভারি", "Service"},
       {"সার্ভিস", "Service"},
       {"বিক্রেতা", "Service"},
       {"দাম", "Pricing"},
       {"মূল্য", "Pricing"},
       {"প্যাকেজিং", "Packaging"},
       {"বক্স", "Packaging"}},
      {{{"ভালো", "চমৎকার", "দারুণ", "অসাধারণ", "সন্তোষজনক", "সেরা"},
        {"খারাপ", "বাজে", "দুর্বল", "হতাশাজনক", "নিম্নমানের", "জঘন্য"},
        {"মোটামুটি", "সাধারণ", "চলনসই", "গড়পড়তা", "মাঝারি"}}},
      {"খুব", "অনেক", "বেশ"},
      {"এই", "ফোনের", "আমার", "কাছে", "সত্যি", "বলতে", "পণ্যটির", "মনে", "হয়",
       "আর", "তবে", "এটার"},
      {"ছিল", "লাগলো", "হয়েছে", "পেয়েছি"}};
  return *lexicon;
}

Corpus GenerateSyntheticCorpus(const SyntheticOptions& options,
                               const SyntheticLexicon& lexicon) {
  std::mt19937_64 rng(options.seed);
  auto chance = [&](double p) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
  };
  auto pick = [&](const auto& v) -> const auto& {
    return v[rng() % std::size(v)];
  };
  static constexpr std::array<const char*, 4> kSeparators = {"। ", ", ", "! ",
                                                             " । "};
  static constexpr std::array<const char*, 4> kEmoji = {"😊", "👍", "😡", "❤️"};

  Corpus corpus;
  corpus.reserve(options.reviews);
  for (size_t r = 0; r < options.reviews; ++r) {
    Builder text;
    std::vector<Triplet> triplets;
    const size_t clauses = chance(options.two_clause_fraction) ? 2 : 1;
    std::vector<size_t> aspect_ids;
    while (aspect_ids.size() < clauses) {
      const size_t id = rng() % lexicon.aspects.size();
      if (std::find(aspect_ids.begin(), aspect_ids.end(), id) ==
          aspect_ids.end()) {
        aspect_ids.push_back(id);
      }
    }
    std::string category;
    for (size_t c = 0; c < clauses; ++c) {
      if (c > 0) {
        text.Append(pick(kSeparators));
        text.Append(pick(lexicon.fillers));
        text.Append(" ");
      }
      const size_t lead = rng() % 3;
      for (size_t i = 0; i < lead; ++i) {
        text.Append(pick(lexicon.fillers));
        text.Append(chance(options.noise_fraction / 4) ? "  " : " ");
      }
      const auto& [aspect_term, aspect_category] =
          lexicon.aspects[aspect_ids[c]];
      if (category.empty()) category = aspect_category;
      const Span aspect = text.Append(aspect_term);
      text.Append(" ");
      const int polarity = static_cast<int>(rng() % kNumPolarities);
      Span opinion;
      if (chance(options.intensifier_fraction)) {
        opinion = text.Append(pick(lexicon.intensifiers));
        text.Append(" ");
        opinion.end = text.Append(pick(lexicon.opinions[polarity])).end;
      } else {
        opinion = text.Append(pick(lexicon.opinions[polarity]));
      }
      if (chance(0.5)) {
        text.Append(" ");
        text.Append(pick(lexicon.closers));
      }
      triplets.push_back(
          {aspect, opinion, kPolarityOrder[polarity], aspect_category});
    }
    text.Append(chance(0.5) ? "।" : "!");
    if (chance(options.noise_fraction)) {
      text.Append(" ");
      text.Append(pick(kEmoji));
    }
    std::sort(triplets.begin(), triplets.end());

    AnnotatedReview review;
    review.review.id = fmt::format("syn-{:05}", r);
    review.review.platform = kAllPlatforms[r % kAllPlatforms.size()];
    review.review.raw_text = text.text();
    review.review.collected_at =
        fmt::format("2024-{:02}-{:02}", 1 + r % 12, 1 + r % 28);
    review.review.product_category = category;
    review.annotations.push_back({"generator", triplets});
    review.gold = triplets;
    corpus.push_back(std::move(review));
  }
  return corpus;
}

}  // namespace aste

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
#include <random>

#include "aste/file_util.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace aste {
namespace {

Triplet MakeTriplet(size_t as, size_t ae, size_t os, size_t oe,
                    Polarity p = Polarity::kPositive) {
  return Triplet{{as, ae}, {os, oe}, p, std::nullopt};
}

AnnotationRecord Record(std::string id, std::vector<Triplet> triplets) {
  return AnnotationRecord{std::move(id), std::move(triplets)};
}

constexpr char kMinimal[] =
    R"({"id":"r1","platform":"daraz","text":"ভালো ফোন","annotations":)"
    R"([{"annotator":"a1","triplets":[{"aspect":{"start":5,"end":8},)"
    R"("opinion":{"start":0,"end":4},"polarity":"positive"}]}]})"
    "\n";

TEST(ParseCorpusTest, MinimalRecord) {
  auto corpus = ParseCorpus(kMinimal);
  ASSERT_OK(corpus.status());
  ASSERT_EQ(corpus->size(), 1u);
  const AnnotatedReview& r = corpus->front();
  EXPECT_EQ(r.review.id, "r1");
  EXPECT_EQ(r.review.platform, Platform::kDaraz);
  ASSERT_EQ(r.annotations.size(), 1u);
  EXPECT_EQ(SpanText(r.review, r.annotations[0].triplets[0].aspect), "ফোন");
  EXPECT_FALSE(r.gold.has_value());
}

TEST(ParseCorpusTest, SpanPastEndCitesReviewId) {
  std::string line = kMinimal;
  line.replace(line.find("\"end\":8"), 7, "\"end\":9");
  auto corpus = ParseCorpus(line);
  ASSERT_FALSE(corpus.ok());
  EXPECT_NE(corpus.status().message().find("r1"), std::string::npos);
  EXPECT_NE(corpus.status().message().find("line 1"), std::string::npos);
}

TEST(ParseCorpusTest, MalformedLineNamesLineAndField) {
  const std::string content =
      std::string(kMinimal) + R"({"id":"r2","platform":"daraz"})" + "\n";
  auto corpus = ParseCorpus(content);
  ASSERT_FALSE(corpus.ok());
  const std::string msg(corpus.status().message());
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("'text'"), std::string::npos) << msg;

  auto bad_json = ParseCorpus("{not json\n");
  ASSERT_FALSE(bad_json.ok());
  EXPECT_NE(std::string(bad_json.status().message()).find("line 1"),
            std::string::npos);
}

TEST(ParseCorpusTest, RejectsUnknownPlatformAndPolarity) {
  std::string line = kMinimal;
  line.replace(line.find("daraz"), 5, "amazon");
  EXPECT_FALSE(ParseCorpus(line).ok());
  line = kMinimal;
  line.replace(line.find("positive"), 8, "mixed");
  EXPECT_FALSE(ParseCorpus(line).ok());
}

TEST(ParseCorpusTest, RejectsDuplicateIds) {
  auto corpus = ParseCorpus(std::string(kMinimal) + kMinimal);
  ASSERT_FALSE(corpus.ok());
  EXPECT_NE(std::string(corpus.status().message()).find("duplicate"),
            std::string::npos);
}

TEST(ParseCorpusTest, RejectsWhitespaceSpanAndDuplicateTriplet) {
  std::string line = kMinimal;
  line.replace(line.find("\"start\":5,\"end\":8"), 17, "\"start\":4,\"end\":5");
  EXPECT_FALSE(ParseCorpus(line).ok());

  Corpus corpus = *ParseCorpus(kMinimal);
  auto& triplets = corpus[0].annotations[0].triplets;
  triplets.push_back(triplets[0]);
  EXPECT_FALSE(ValidateAnnotatedReview(corpus[0]).ok());
}

TEST(ParseCorpusTest, GoldMustMatchMajorityVote) {
  Corpus corpus = *ParseCorpus(kMinimal);
  corpus[0].gold = std::vector<Triplet>{};
  EXPECT_FALSE(ValidateAnnotatedReview(corpus[0]).ok());
  corpus[0].gold = corpus[0].annotations[0].triplets;
  EXPECT_OK(ValidateAnnotatedReview(corpus[0]));
}

TEST(ParseCorpusTest, FixtureMatchesManifest) {
  auto corpus = LoadCorpus("data/fixture_corpus.jsonl");
  ASSERT_OK(corpus.status());
  EXPECT_EQ(corpus->size(), 10u);
  auto manifest = LoadManifest("data/fixture_manifest.json");
  ASSERT_OK(manifest.status());
  auto stats = ComputeCorpusStats(*corpus);
  ASSERT_OK(stats.status());
  EXPECT_OK(CheckManifest(*stats, *manifest));
  EXPECT_EQ(stats->per_platform.at(Platform::kDaraz), 4u);
  EXPECT_EQ(stats->per_category.at("Pricing").neutral, 1u);
}

TEST(ParseCorpusTest, RoundTrip) {
  auto corpus = LoadCorpus("data/fixture_corpus.jsonl");
  ASSERT_OK(corpus.status());
  const std::string serialized = SerializeCorpus(*corpus);
  auto reparsed = ParseCorpus(serialized);
  ASSERT_OK(reparsed.status());
  ASSERT_EQ(reparsed->size(), corpus->size());
  for (size_t i = 0; i < corpus->size(); ++i) {
    const AnnotatedReview& a = (*corpus)[i];
    const AnnotatedReview& b = (*reparsed)[i];
    EXPECT_EQ(a.review, b.review);
    ASSERT_EQ(a.annotations.size(), b.annotations.size());
    for (size_t k = 0; k < a.annotations.size(); ++k) {
      EXPECT_EQ(a.annotations[k].annotator_id, b.annotations[k].annotator_id);
      EXPECT_EQ(a.annotations[k].triplets, b.annotations[k].triplets);
    }
    EXPECT_EQ(a.gold, b.gold);
  }
  EXPECT_EQ(SerializeCorpus(*reparsed), serialized);
}

TEST(AdjudicateTest, Unanimous) {
  const Triplet t = MakeTriplet(0, 2, 3, 5);
  const std::vector<AnnotationRecord> records = {Record("a", {t}),
                                                 Record("b", {t})};
  auto adj = Adjudicate(records);
  ASSERT_OK(adj.status());
  EXPECT_EQ(adj->gold, std::vector<Triplet>{t});
  EXPECT_TRUE(adj->conflicts.empty());
}

TEST(AdjudicateTest, DisjointPairIsConflict) {
  const Triplet t1 = MakeTriplet(0, 2, 3, 5);
  const Triplet t2 = MakeTriplet(0, 2, 3, 5, Polarity::kNegative);
  const std::vector<AnnotationRecord> records = {Record("a", {t1}),
                                                 Record("b", {t2})};
  auto adj = Adjudicate(records);
  ASSERT_OK(adj.status());
  EXPECT_TRUE(adj->gold.empty());
  EXPECT_EQ(adj->conflicts, (std::vector<Triplet>{t1, t2}));
}

TEST(AdjudicateTest, TwoOfThreeMajority) {
  const Triplet t = MakeTriplet(0, 2, 3, 5);
  const std::vector<AnnotationRecord> records = {
      Record("a", {t}), Record("b", {t}), Record("c", {})};
  auto adj = Adjudicate(records);
  ASSERT_OK(adj.status());
  EXPECT_EQ(adj->gold, std::vector<Triplet>{t});
}

TEST(AdjudicateTest, NeedsTwoRecords) {
  const std::vector<AnnotationRecord> one = {Record("a", {})};
  EXPECT_FALSE(Adjudicate(one).ok());
  EXPECT_FALSE(Adjudicate({}).ok());
}

TEST(AgreementTest, Examples) {
  const Triplet t1 = MakeTriplet(0, 2, 3, 5);
  const Triplet t2 = MakeTriplet(6, 8, 9, 10);
  const std::vector<AnnotationRecord> same = {Record("a", {t1, t2}),
                                              Record("b", {t1, t2})};
  EXPECT_DOUBLE_EQ(*Agreement(same), 1.0);
  const std::vector<AnnotationRecord> disjoint = {Record("a", {t1}),
                                                  Record("b", {t2})};
  EXPECT_DOUBLE_EQ(*Agreement(disjoint), 0.0);
  // P = 1, R = 1/2 -> F1 = 2/3.
  const std::vector<AnnotationRecord> partial = {Record("a", {t1, t2}),
                                                 Record("b", {t1})};
  EXPECT_NEAR(*Agreement(partial), 2.0 / 3.0, 1e-12);
  const std::vector<AnnotationRecord> reversed = {partial[1], partial[0]};
  EXPECT_DOUBLE_EQ(*Agreement(reversed), *Agreement(partial));
}

TEST(CorpusStatsTest, UnadjudicatedIsAnError) {
  Corpus corpus = *ParseCorpus(kMinimal);
  auto stats = ComputeCorpusStats(corpus);
  ASSERT_FALSE(stats.ok());
  EXPECT_NE(std::string(stats.status().message()).find("r1"),
            std::string::npos);
  EXPECT_EQ(AdjudicateCorpus(corpus), 0u);
  EXPECT_OK(ComputeCorpusStats(corpus).status());
}

TEST(CorpusStatsTest, EmptyCorpus) {
  auto stats = ComputeCorpusStats({});
  ASSERT_OK(stats.status());
  EXPECT_EQ(stats->total_reviews, 0u);
  EXPECT_TRUE(stats->per_category.empty());
}

TEST(CorpusStatsTest, PublishedTablesSatisfySumIdentities) {
  auto manifest = LoadManifest("data/table1_manifest.json");
  ASSERT_OK(manifest.status());
  size_t sum = 0;
  for (const auto& [p, n] : manifest->per_platform) sum += n;
  EXPECT_EQ(sum, 3345u);
  EXPECT_EQ(*manifest->total_reviews, sum);
  for (const auto& [name, c] : manifest->per_category) {
    EXPECT_EQ(c.positive + c.negative + c.neutral, c.total) << name;
    EXPECT_EQ(c.neutral, 0u) << name;
  }
  EXPECT_EQ(manifest->per_category.at("Battery Life").total, 732u);
}

// Random corpora with 2-5 annotators per review; stats invariants must hold
// and adjudication must ignore record order.
TEST(CorpusPropertyTest, StatsInvariantsAndPermutationInvariance) {
  std::mt19937_64 rng(11);
  const std::string text = "ব্যাটারি ভালো দাম কম সার্ভিস খারাপ";
  const std::vector<Triplet> pool = {
      MakeTriplet(0, 8, 9, 13), MakeTriplet(14, 17, 18, 20),
      MakeTriplet(14, 17, 18, 20, Polarity::kNegative),
      MakeTriplet(21, 28, 29, 34, Polarity::kNegative),
      MakeTriplet(21, 28, 29, 34, Polarity::kNeutral)};
  const std::vector<std::string> categories = {"Battery Life", "Pricing",
                                               "Service"};
  for (int iter = 0; iter < 200; ++iter) {
    Corpus corpus;
    const size_t n = 1 + rng() % 12;
    for (size_t i = 0; i < n; ++i) {
      AnnotatedReview r;
      r.review.id = "r" + std::to_string(i);
      r.review.platform = kAllPlatforms[rng() % kAllPlatforms.size()];
      r.review.raw_text = text;
      const size_t annotators = 2 + rng() % 4;
      for (size_t a = 0; a < annotators; ++a) {
        AnnotationRecord rec;
        rec.annotator_id = "a" + std::to_string(a);
        for (const Triplet& t : pool) {
          if (rng() % 2) {
            Triplet c = t;
            c.category = categories[t.aspect.start % 3];
            rec.triplets.push_back(c);
          }
        }
        r.annotations.push_back(rec);
      }
      auto forward = Adjudicate(r.annotations);
      std::vector<AnnotationRecord> shuffled = r.annotations;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      auto backward = Adjudicate(shuffled);
      ASSERT_OK(forward.status());
      ASSERT_EQ(forward->gold, backward->gold);
      ASSERT_EQ(forward->conflicts, backward->conflicts);
      corpus.push_back(std::move(r));
    }
    AdjudicateCorpus(corpus);
    for (const AnnotatedReview& r : corpus) {
      ASSERT_OK(ValidateAnnotatedReview(r));
    }
    auto stats = ComputeCorpusStats(corpus);
    ASSERT_OK(stats.status());
    EXPECT_OK(stats->Validate());
    EXPECT_EQ(stats->total_reviews, n);
  }
}

}  // namespace
}  // namespace aste

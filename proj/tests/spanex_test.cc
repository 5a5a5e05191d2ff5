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

#include "aste/spanex.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "gtest/gtest.h"
#include "test_util.h"

namespace aste {
namespace {

std::vector<TokenInterval> BruteForceSpans(size_t n, size_t max_len) {
  std::vector<TokenInterval> out;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (j >= i && j - i < max_len) out.push_back({i, j});
    }
  }
  return out;
}

TEST(EnumerateSpansTest, Examples) {
  EXPECT_EQ(EnumerateSpans(1, 3), (std::vector<TokenInterval>{{0, 0}}));
  EXPECT_EQ(EnumerateSpans(4, 2).size(), 7u);
  EXPECT_EQ(EnumerateSpans(5, 3).size(), 12u);
  EXPECT_TRUE(EnumerateSpans(0, 4).empty());
}

TEST(EnumerateSpansTest, MatchesBruteForce) {
  for (size_t n = 0; n <= 50; ++n) {
    for (size_t L = 1; L <= 8; ++L) {
      const auto spans = EnumerateSpans(n, L);
      ASSERT_EQ(spans, BruteForceSpans(n, L)) << n << " " << L;
      ASSERT_EQ(SpanCount(n, L), spans.size());
    }
  }
}

TEST(DropStopwordEdgesTest, InteriorStopwordsAllowed) {
  const auto text = Preprocess("দাম ও মান ভালো", {}, StopwordSet({"ও"}));
  const auto spans = DropStopwordEdges(text, EnumerateSpans(4, 3));
  for (const TokenInterval& s : spans) {
    EXPECT_NE(s.first, 1u);
    EXPECT_NE(s.last, 1u);
  }
  EXPECT_NE(std::find(spans.begin(), spans.end(), TokenInterval{0, 2}),
            spans.end());
}

// Reference NMS: a survivor is kept iff no kept survivor ranked above it
// overlaps it. Resolved by memoized recursion over an explicit pairwise
// overlap matrix rather than a single greedy sweep.
std::vector<CandidateSpan> OraclePrune(std::vector<CandidateSpan> candidates,
                                       SpanRole role, double threshold,
                                       size_t top_k) {
  std::erase_if(candidates, [&](const CandidateSpan& c) {
    return !(c.score(role) >= threshold);
  });
  const size_t n = candidates.size();
  auto key = [&](size_t i) {
    const auto& c = candidates[i];
    return std::make_tuple(-c.score(role), c.span.first, c.span.last);
  };
  std::vector<std::vector<bool>> beats(n, std::vector<bool>(n, false));
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = 0; b < n; ++b) {
      const auto& x = candidates[a].span;
      const auto& y = candidates[b].span;
      const bool overlap = !(x.last < y.first || y.last < x.first);
      beats[a][b] = a != b && overlap && key(a) < key(b);
    }
  }
  std::map<size_t, bool> memo;
  std::function<bool(size_t)> kept = [&](size_t b) -> bool {
    if (auto it = memo.find(b); it != memo.end()) return it->second;
    bool result = true;
    for (size_t a = 0; a < n; ++a) {
      if (beats[a][b] && kept(a)) {
        result = false;
        break;
      }
    }
    return memo[b] = result;
  };
  std::vector<size_t> survivors;
  for (size_t i = 0; i < n; ++i) {
    if (kept(i)) survivors.push_back(i);
  }
  std::sort(survivors.begin(), survivors.end(),
            [&](size_t a, size_t b) { return key(a) < key(b); });
  if (survivors.size() > top_k) survivors.resize(top_k);
  std::vector<CandidateSpan> out;
  for (size_t i : survivors) out.push_back(candidates[i]);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.span.first, a.span.last) <
           std::tie(b.span.first, b.span.last);
  });
  return out;
}

std::vector<CandidateSpan> RandomCandidates(std::mt19937_64& rng,
                                            size_t count) {
  std::uniform_int_distribution<size_t> len_dist(1, 4);
  std::uniform_int_distribution<size_t> start_dist(0, 15);
  std::uniform_int_distribution<int> coarse(0, 10);
  std::set<TokenInterval> seen;
  std::vector<CandidateSpan> out;
  while (out.size() < count) {
    const size_t start = start_dist(rng);
    const TokenInterval span{start, start + len_dist(rng) - 1};
    if (!seen.insert(span).second) continue;
    // Coarse scores make ties frequent so tie-breaking gets exercised.
    out.push_back({span, coarse(rng) / 10.0, coarse(rng) / 10.0});
  }
  return out;
}

TEST(PruneTest, Examples) {
  const std::vector<CandidateSpan> two = {{{0, 1}, 0.9, 0.0},
                                          {{1, 2}, 0.8, 0.0}};
  EXPECT_EQ(Prune(two, SpanRole::kAspect, 0.5, 10),
            (std::vector<CandidateSpan>{two[0]}));
  EXPECT_TRUE(Prune(two, SpanRole::kAspect, 0.95, 10).empty());
  EXPECT_TRUE(Prune(two, SpanRole::kOpinion, 0.5, 10).empty());
}

TEST(PruneTest, TiesPreferEarlierThenShorter) {
  const std::vector<CandidateSpan> tied = {
      {{1, 3}, 0.7, 0}, {{1, 1}, 0.7, 0}, {{0, 1}, 0.7, 0}};
  EXPECT_EQ(Prune(tied, SpanRole::kAspect, 0.5, 10),
            (std::vector<CandidateSpan>{tied[2]}));
  const std::vector<CandidateSpan> same_start = {{{2, 4}, 0.7, 0},
                                                 {{2, 3}, 0.7, 0}};
  EXPECT_EQ(Prune(same_start, SpanRole::kAspect, 0.5, 10),
            (std::vector<CandidateSpan>{same_start[1]}));
}

TEST(PruneTest, MatchesOracleOnRandomSets) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> k_dist(1, 12);
  std::uniform_real_distribution<double> tau(0.0, 1.0);
  for (int iter = 0; iter < 500; ++iter) {
    auto candidates = RandomCandidates(rng, 50);
    const SpanRole role = iter % 2 ? SpanRole::kAspect : SpanRole::kOpinion;
    const double threshold = tau(rng);
    const size_t top_k = k_dist(rng);
    const auto pruned = Prune(candidates, role, threshold, top_k);
    ASSERT_EQ(pruned, OraclePrune(candidates, role, threshold, top_k));
    for (size_t a = 0; a < pruned.size(); ++a) {
      for (size_t b = a + 1; b < pruned.size(); ++b) {
        ASSERT_FALSE(pruned[a].span.Overlaps(pruned[b].span));
      }
      ASSERT_NE(std::find(candidates.begin(), candidates.end(), pruned[a]),
                candidates.end());
    }
    std::shuffle(candidates.begin(), candidates.end(), rng);
    ASSERT_EQ(Prune(candidates, role, threshold, top_k), pruned);
  }
}

class ScorerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    text_ = Preprocess("এই ফোনের ব্যাটারি খুব ভালো", {}, {});
  }
  TokenizedText text_;
};

TEST_F(ScorerTest, ConstantScorer) {
  ConstantSpanScorer scorer(0.5, 0.5);
  const auto spans = EnumerateSpans(text_.size(), 4);
  const auto scored = ScoreSpans({&text_, nullptr}, spans, scorer);
  ASSERT_OK(scored.status());
  ASSERT_EQ(scored->size(), spans.size());
  for (size_t i = 0; i < spans.size(); ++i) {
    EXPECT_EQ((*scored)[i].span, spans[i]);
    EXPECT_EQ((*scored)[i].aspect_score, 0.5);
    EXPECT_EQ((*scored)[i].opinion_score, 0.5);
  }
}

TEST_F(ScorerTest, LexiconScorerUsesHead) {
  LexiconSpanScorer scorer(TermLexicon({"ব্যাটারি"}), TermLexicon({"খুব ভালো"}));
  const auto head = scorer.Score({&text_, nullptr}, {1, 2});
  ASSERT_OK(head.status());
  EXPECT_EQ(head->first, 1.0);
  EXPECT_EQ(head->second, 0.0);
  const auto phrase = scorer.Score({&text_, nullptr}, {3, 4});
  ASSERT_OK(phrase.status());
  EXPECT_EQ(phrase->first, 0.0);
  EXPECT_EQ(phrase->second, 1.0);
  const auto non_head = scorer.Score({&text_, nullptr}, {2, 3});
  ASSERT_OK(non_head.status());
  EXPECT_EQ(non_head->first, 0.0);
}

TEST_F(ScorerTest, LexiconHeadMatchIgnoresMixedRoleSpans) {
  LexiconSpanScorer scorer(TermLexicon({"ব্যাটারি"}), TermLexicon({"ভালো"}));
  const auto mixed = scorer.Score({&text_, nullptr}, {2, 4});
  ASSERT_OK(mixed.status());
  EXPECT_EQ(mixed->second, 0.0);
  const auto clean = scorer.Score({&text_, nullptr}, {3, 4});
  ASSERT_OK(clean.status());
  EXPECT_EQ(clean->second, 1.0);
}

TEST(TermLexiconTest, ParsesAndNormalizes) {
  const auto lexicon =
      TermLexicon::Parse("# aspects\nদাম\n\n  ব্যাটারি  লাইফ \n");
  ASSERT_OK(lexicon.status());
  EXPECT_TRUE(lexicon->Contains(U"দাম"));
  EXPECT_TRUE(lexicon->Contains(U"ব্যাটারি লাইফ"));
  EXPECT_EQ(lexicon->Terms().size(), 2u);
  EXPECT_FALSE(TermLexicon::Parse("\xff\n").ok());
}

TEST(ScoreSpansTest, ErrorCarriesInterval) {
  const auto text = Preprocess("দাম ভালো", {}, {});
  auto scorer = LogisticSpanScorer::FromJson(
      {{"type", "logistic"},
       {"hash_bits", 8},
       {"seed", 1},
       {"epochs", 1},
       {"learning_rate", 0.1},
       {"l2", 0.0},
       {"balance_classes", true},
       {"use_embeddings", false},
       {"embedding_dim", 0},
       {"aspect_lexicon", nlohmann::json::array()},
       {"opinion_lexicon", nlohmann::json::array()},
       {"aspect", {{"bias", 0.0}, {"weights", nlohmann::json::array()}}},
       {"opinion", {{"bias", 0.0}, {"weights", nlohmann::json::array()}}}});
  ASSERT_OK(scorer.status());
  const auto scored = ScoreSpans({&text, nullptr}, {{0, 0}, {1, 5}}, *scorer);
  ASSERT_FALSE(scored.ok());
  EXPECT_NE(scored.status().message().find("[1, 5]"), std::string::npos);
}

struct TrainingSet {
  std::vector<TokenizedText> texts;
  std::vector<SpanExample> examples;
};

// Aspect nouns followed by an intensifier and an opinion adjective, padded
// with filler words.
TrainingSet MakeTrainingSet(uint64_t seed, size_t reviews) {
  const std::vector<std::string> aspects = {"ব্যাটারি", "ক্যামেরা", "দাম",
                                            "ডেলিভারি", "প্যাকেজিং"};
  const std::vector<std::string> opinions = {"ভালো", "খারাপ", "চমৎকার", "বাজে",
                                             "সাধারণ"};
  const std::vector<std::string> fillers = {"এই",   "ফোনের", "আমার",
                                            "সত্যি", "মনে",   "হয়"};
  std::mt19937_64 rng(seed);
  auto pick = [&](const std::vector<std::string>& v) {
    return v[rng() % v.size()];
  };
  TrainingSet set;
  set.texts.reserve(reviews);
  std::vector<std::pair<TokenInterval, TokenInterval>> gold;
  for (size_t r = 0; r < reviews; ++r) {
    std::string raw;
    const size_t lead = rng() % 3;
    for (size_t i = 0; i < lead; ++i) raw += pick(fillers) + " ";
    raw += pick(aspects) + " খুব " + pick(opinions);
    const size_t trail = rng() % 2;
    for (size_t i = 0; i < trail; ++i) raw += " " + pick(fillers);
    set.texts.push_back(Preprocess(raw, {}, {}));
    gold.push_back({{lead, lead}, {lead + 1, lead + 2}});
  }
  for (size_t r = 0; r < reviews; ++r) {
    for (const TokenInterval& span : EnumerateSpans(set.texts[r].size(), 4)) {
      set.examples.push_back({&set.texts[r], nullptr, span,
                              span == gold[r].first, span == gold[r].second});
    }
  }
  return set;
}

double OracleLogistic(const LogisticSpanScorer::RoleModel& model,
                      const SparseFeatures& x) {
  double z = model.bias;
  for (const auto& [i, v] : x) z += model.weights.at(i) * v;
  return 1.0 / (1.0 + std::exp(-z));
}

TEST(LogisticSpanScorerTest, LearnsAndMatchesOracle) {
  const TrainingSet train = MakeTrainingSet(1, 120);
  LogisticScorerConfig config;
  config.hash_bits = 14;
  auto scorer = LogisticSpanScorer::Train(train.examples, TermLexicon(),
                                          TermLexicon(), config);
  ASSERT_OK(scorer.status());

  const TrainingSet held_out = MakeTrainingSet(2, 40);
  size_t correct = 0;
  for (const SpanExample& ex : held_out.examples) {
    const ScoringInput input{ex.text, nullptr};
    const auto scores = scorer->Score(input, ex.span);
    ASSERT_OK(scores.status());
    const SparseFeatures x = scorer->Features(input, ex.span);
    EXPECT_NEAR(scores->first,
                OracleLogistic(scorer->model(SpanRole::kAspect), x), 1e-6);
    EXPECT_NEAR(scores->second,
                OracleLogistic(scorer->model(SpanRole::kOpinion), x), 1e-6);
    correct += (scores->first >= 0.5) == ex.is_aspect;
    correct += (scores->second >= 0.5) == ex.is_opinion;
  }
  EXPECT_GE(correct, 2 * held_out.examples.size() * 95 / 100);
}

TEST(LogisticSpanScorerTest, DeterministicAndRoundTrips) {
  const TrainingSet train = MakeTrainingSet(3, 40);
  LogisticScorerConfig config;
  config.hash_bits = 12;
  config.epochs = 3;
  auto a = LogisticSpanScorer::Train(train.examples, TermLexicon({"দাম"}),
                                     TermLexicon(), config);
  auto b = LogisticSpanScorer::Train(train.examples, TermLexicon({"দাম"}),
                                     TermLexicon(), config);
  ASSERT_OK(a.status());
  ASSERT_OK(b.status());
  EXPECT_EQ(a->ToJson(), b->ToJson());
  auto restored = SpanScorerFromJson(a->ToJson());
  ASSERT_OK(restored.status());
  for (const SpanExample& ex : train.examples) {
    EXPECT_EQ(*a->Score({ex.text, nullptr}, ex.span),
              *(*restored)->Score({ex.text, nullptr}, ex.span));
  }
}

TEST(LogisticSpanScorerTest, RejectsDegenerateData) {
  const TrainingSet train = MakeTrainingSet(4, 5);
  std::vector<SpanExample> no_aspects = train.examples;
  for (SpanExample& ex : no_aspects) ex.is_aspect = false;
  EXPECT_EQ(LogisticSpanScorer::Train(no_aspects, {}, {}, {}).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(SpanScorerFromJsonTest, RejectsUnknownType) {
  EXPECT_FALSE(SpanScorerFromJson({{"type", "bert"}}).ok());
  EXPECT_FALSE(SpanScorerFromJson(nlohmann::json::array()).ok());
}

}  // namespace
}  // namespace aste

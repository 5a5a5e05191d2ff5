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

// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "aste/corpus.h"
#include "aste/evalkit.h"
#include "aste/hashing.h"
#include "aste/logging.h"
#include "aste/pairmatch.h"
#include "aste/pipeline.h"
#include "aste/polarity.h"
#include "aste/spanex.h"
#include "aste/synthetic.h"
#include "aste/textnorm.h"
#include "aste/unicode.h"
#include "fmt/format.h"
#include "test_util.h"

namespace aste {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome Fail(std::string detail) { return {false, std::move(detail)}; }

// AC1 -----------------------------------------------------------------------

Outcome MetricIdentities() {
  struct Row {
    const char* name;
    double p, r, printed_f1;
  };
  const Row rows[] = {{"aspect", 0.774, 0.758, 0.766},
                      {"opinion", 0.752, 0.737, 0.744},
                      {"overall", 0.861, 0.845, 0.853}};
  for (const Row& row : rows) {
    const double f1 = F1(row.p, row.r);
    const double oracle = 2 * row.p * row.r / (row.p + row.r);
    if (std::abs(f1 - oracle) > 1e-12 ||
        std::abs(f1 - row.printed_f1) > 0.0005) {
      return Fail(fmt::format("{}: f1={:.5f}, printed {:.3f}", row.name, f1,
                              row.printed_f1));
    }
  }
  const double sentiment = F1(0.884, 0.875);
  if (std::abs(sentiment - 0.891) <= 0.0005 ||
      std::abs(sentiment - 0.87955) > 0.0001) {
    return Fail(fmt::format("sentiment f1={:.5f}", sentiment));
  }
  return {true, fmt::format("3 rows within 5e-4; sentiment row {:.4f} != "
                            "0.891 (documented discrepancy)",
                            sentiment)};
}

// AC2 -----------------------------------------------------------------------

// One review per Table I platform count; Table II triplets spread over the
// first reviews, each agreed by two annotators.
Corpus BuildTableFixture(const CorpusManifest& manifest) {
  const std::string text = "ব্যাটারি ভালো";
  std::vector<Triplet> triplets;
  for (const auto& [category, counts] : manifest.per_category) {
    const std::pair<Polarity, size_t> parts[] = {
        {Polarity::kPositive, counts.positive},
        {Polarity::kNegative, counts.negative},
        {Polarity::kNeutral, counts.neutral}};
    for (const auto& [polarity, n] : parts) {
      for (size_t i = 0; i < n; ++i) {
        triplets.push_back({{0, 8}, {9, 13}, polarity, category});
      }
    }
  }
  Corpus corpus;
  size_t next = 0;
  for (const auto& [platform, n] : manifest.per_platform) {
    for (size_t i = 0; i < n; ++i) {
      AnnotatedReview r;
      r.review.id = fmt::format("t1-{:05d}", corpus.size());
      r.review.platform = platform;
      r.review.raw_text = text;
      std::vector<Triplet> gold;
      if (next < triplets.size()) gold.push_back(triplets[next++]);
      r.annotations = {{"a1", gold}, {"a2", gold}};
      corpus.push_back(std::move(r));
    }
  }
  AdjudicateCorpus(corpus);
  return corpus;
}

Outcome CorpusIdentities() {
  auto table = LoadManifest("data/table1_manifest.json");
  if (!table.ok()) return Fail(table.status().ToString());
  size_t platform_sum = 0;
  for (const auto& [p, n] : table->per_platform) platform_sum += n;
  if (platform_sum != 3345 || table->total_reviews != platform_sum ||
      table->per_platform.at(Platform::kDaraz) != 2431 ||
      table->per_platform.at(Platform::kFacebook) != 467 ||
      table->per_platform.at(Platform::kRokomari) != 273 ||
      table->per_platform.at(Platform::kShajgoj) != 82 ||
      table->per_platform.at(Platform::kOther) != 92) {
    return Fail(fmt::format("Table I sum {}", platform_sum));
  }
  for (const auto& [name, c] : table->per_category) {
    if (c.positive + c.negative + c.neutral != c.total) {
      return Fail(fmt::format("Table II row {} does not sum", name));
    }
  }
  const CategoryCounts battery = table->per_category.at("Battery Life");
  if (battery.positive != 412 || battery.negative != 320 ||
      battery.total != 732) {
    return Fail("Battery Life row is not 412 + 320 = 732");
  }
  const Corpus mirror = BuildTableFixture(*table);
  auto mirror_stats = ComputeCorpusStats(mirror);
  if (!mirror_stats.ok()) return Fail(mirror_stats.status().ToString());
  if (auto s = CheckManifest(*mirror_stats, *table); !s.ok()) {
    return Fail(fmt::format("Table I mirror: {}", s.ToString()));
  }
  auto fixture = LoadCorpus("data/fixture_corpus.jsonl");
  auto manifest = LoadManifest("data/fixture_manifest.json");
  if (!fixture.ok() || !manifest.ok()) return Fail("fixture files unreadable");
  auto stats = ComputeCorpusStats(*fixture);
  if (!stats.ok()) return Fail(stats.status().ToString());
  if (auto s = CheckManifest(*stats, *manifest); !s.ok()) {
    return Fail(fmt::format("10-record fixture: {}", s.ToString()));
  }
  return {true, fmt::format("3345 reviews over 5 platforms, {} category rows, "
                            "mirror and 10-record fixture match manifests",
                            table->per_category.size())};
}

// AC3 -----------------------------------------------------------------------

struct Best {
  double total = -1;
};

void ExhaustiveBest(const std::vector<std::vector<double>>& w, double tau,
                    size_t a, std::vector<bool>& used, double total,
                    Best& best) {
  if (a == w.size()) {
    best.total = std::max(best.total, total);
    return;
  }
  ExhaustiveBest(w, tau, a + 1, used, total, best);
  for (size_t o = 0; o < used.size(); ++o) {
    if (used[o] || w[a][o] < tau) continue;
    used[o] = true;
    ExhaustiveBest(w, tau, a + 1, used, total + w[a][o], best);
    used[o] = false;
  }
}

Outcome MatchingOracle() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int iter = 0; iter < 1000; ++iter) {
    const size_t na = 1 + rng() % 4;
    const size_t no = 1 + rng() % 4;
    MatchPolicy policy;
    policy.threshold = unit(rng);
    PairGraph graph;
    for (size_t a = 0; a < na; ++a) {
      graph.aspects.push_back({{2 * a, 2 * a}, 1.0, 0.0});
    }
    for (size_t o = 0; o < no; ++o) {
      graph.opinions.push_back({{20 + 2 * o, 20 + 2 * o}, 0.0, 1.0});
    }
    graph.weights.assign(na, std::vector<double>(no));
    for (auto& row : graph.weights) {
      for (double& x : row) x = unit(rng);
    }
    const auto matched = MatchPairs(graph, policy);
    std::set<size_t> as, os;
    double total = 0;
    for (const auto& [a, o] : matched) {
      if (a >= na || o >= no || !as.insert(a).second || !os.insert(o).second ||
          graph.weights[a][o] < policy.threshold) {
        return Fail(fmt::format("graph {}: invalid matching", iter));
      }
      total += graph.weights[a][o];
    }
    Best best;
    std::vector<bool> used(no, false);
    ExhaustiveBest(graph.weights, policy.threshold, 0, used, 0.0, best);
    if (std::abs(total - best.total) > 1e-9) {
      return Fail(fmt::format("graph {}: total {} vs optimum {}", iter, total,
                              best.total));
    }
  }
  return {true, "1000 graphs up to 4x4 reach the exhaustive optimum"};
}

// AC4 -----------------------------------------------------------------------

// Exhaustive NMS reference: repeatedly take the best remaining candidate
// (score desc, start asc, length asc) and delete everything it overlaps.
std::vector<CandidateSpan> OracleNms(std::vector<CandidateSpan> pool,
                                     SpanRole role, double tau, size_t top_k) {
  std::erase_if(pool,
                [&](const CandidateSpan& c) { return c.score(role) < tau; });
  std::vector<CandidateSpan> kept;
  while (!pool.empty() && kept.size() < top_k) {
    size_t best = 0;
    for (size_t i = 1; i < pool.size(); ++i) {
      const CandidateSpan& x = pool[i];
      const CandidateSpan& y = pool[best];
      if (x.score(role) != y.score(role)) {
        if (x.score(role) > y.score(role)) best = i;
      } else if (x.span.first != y.span.first) {
        if (x.span.first < y.span.first) best = i;
      } else if (x.span.last < y.span.last) {
        best = i;
      }
    }
    const CandidateSpan winner = pool[best];
    kept.push_back(winner);
    std::erase_if(pool, [&](const CandidateSpan& c) {
      return c.span.first <= winner.span.last &&
             winner.span.first <= c.span.last;
    });
  }
  std::sort(kept.begin(), kept.end(),
            [](const CandidateSpan& x, const CandidateSpan& y) {
              return x.span < y.span;
            });
  return kept;
}

Outcome SpanEnumeration() {
  for (size_t n = 0; n <= 50; ++n) {
    for (size_t len = 1; len <= 8; ++len) {
      std::vector<TokenInterval> brute;
      for (size_t i = 0; i < n; ++i) {
        for (size_t j = i; j < n; ++j) {
          if (j - i + 1 <= len) brute.push_back({i, j});
        }
      }
      size_t formula = 0;
      for (size_t w = 1; w <= std::min(len, n); ++w) formula += n - w + 1;
      if (EnumerateSpans(n, len) != brute || SpanCount(n, len) != formula ||
          brute.size() != formula) {
        return Fail(fmt::format("n={} L={}", n, len));
      }
    }
  }
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int iter = 0; iter < 500; ++iter) {
    const size_t n = 1 + rng() % 20;
    auto spans = EnumerateSpans(n, 1 + rng() % 4);
    std::shuffle(spans.begin(), spans.end(), rng);
    spans.resize(std::min<size_t>(spans.size(), 1 + rng() % 50));
    std::vector<CandidateSpan> candidates;
    const bool coarse = iter % 2 == 0;
    for (TokenInterval s : spans) {
      const double a = coarse ? (rng() % 5) / 4.0 : unit(rng);
      const double o = coarse ? (rng() % 5) / 4.0 : unit(rng);
      candidates.push_back({s, a, o});
    }
    const double tau = unit(rng) * 0.8;
    const size_t top_k = 1 + rng() % 12;
    for (SpanRole role : {SpanRole::kAspect, SpanRole::kOpinion}) {
      if (Prune(candidates, role, tau, top_k) !=
          OracleNms(candidates, role, tau, top_k)) {
        return Fail(fmt::format("candidate set {} differs from oracle", iter));
      }
    }
  }
  return {true, "n<=50, L<=8 counts exact; 500 NMS sets match the oracle"};
}

// AC5 -----------------------------------------------------------------------

class HashSpanScorer : public SpanScorer {
 public:
  absl::StatusOr<std::pair<double, double>> Score(
      const ScoringInput& input, TokenInterval span) const override {
    const uint64_t h =
        Mix64(Fnv1a64(EncodeUtf8(std::u32string(input.text->normalized))) ^
              Mix64(span.first * 131 + span.last));
    return std::make_pair((h & 0xffff) / 65535.0,
                          ((h >> 16) & 0xffff) / 65535.0);
  }
  nlohmann::json ToJson() const override { return {{"type", "hash"}}; }
};

Outcome OffsetAlignment() {
  PipelineConfig config;
  config.spanex.threshold = 0.3;
  config.pairmatch.threshold = 0.0;
  auto backend = MakeBackend(config);
  if (!backend.ok()) return Fail(backend.status().ToString());
  auto model = PipelineModel::FromParts(
      config, {}, *backend, std::make_unique<HashSpanScorer>(),
      std::make_unique<LinearPolarityModel>(
          LinearPolarityModel::Zero(PairFeatureDim(config.polarity.dim))));
  if (!model.ok()) return Fail(model.status().ToString());
  std::mt19937_64 rng(5);
  size_t checked = 0;
  size_t failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::u32string raw32 =
        testing::RandomNoisyBangla(rng, 5 + rng() % 60);
    const std::string raw = EncodeUtf8(raw32);
    const TokenizedText text = Preprocess(raw, {}, {});
    // Every candidate span, then every span extraction actually emits.
    std::vector<std::pair<Span, std::u32string>> pending;
    for (TokenInterval s : EnumerateSpans(text.size(), 4)) {
      auto mapped = RawSpan(text, s);
      if (!mapped.ok()) return Fail(mapped.status().ToString());
      const CharRange r = text.TokenRange(s.first, s.last);
      pending.push_back(
          {*mapped, text.normalized.substr(r.start, r.end - r.start)});
    }
    auto extracted = model->Extract(Review{.id = "r", .raw_text = raw});
    if (!extracted.ok()) return Fail(extracted.status().ToString());
    for (const ExtractedTriplet& t : *extracted) {
      for (const auto& [span, surface] :
           {std::pair{t.triplet.aspect, t.aspect_text},
            std::pair{t.triplet.opinion, t.opinion_text}}) {
        auto it = std::find_if(pending.begin(), pending.end(),
                               [&](const auto& p) { return p.first == span; });
        if (it == pending.end() ||
            EncodeUtf8(raw32.substr(span.start, span.end - span.start)) !=
                surface) {
          ++failures;
          continue;
        }
        pending.push_back(*it);
      }
    }
    for (const auto& [span, expected] : pending) {
      const std::u32string sub =
          raw32.substr(span.start, span.end - span.start);
      if (Normalize(sub, SpellingLexicon()).text != expected) ++failures;
      ++checked;
    }
  }
  if (failures > 0) {
    return Fail(fmt::format("{} of {} spans failed to re-normalize", failures,
                            checked));
  }
  return {true,
          fmt::format("{} spans over 1000 noisy strings, 0 failures", checked)};
}

// AC6 -----------------------------------------------------------------------

PipelineResources SyntheticResources() {
  PipelineResources r;
  r.aspects = TermLexicon(DefaultSyntheticLexicon().AspectTerms());
  r.opinions = TermLexicon(DefaultSyntheticLexicon().OpinionTerms());
  return r;
}

Outcome SyntheticReproduction() {
  const auto start = std::chrono::steady_clock::now();
  PipelineConfig config;
  config.eval.k = 5;
  config.polarity.backend = BackendKind::kHashed;
  SyntheticOptions options;
  options.reviews = 500;
  const Corpus corpus = GenerateSyntheticCorpus(options);
  auto backend = MakeBackend(config);
  if (!backend.ok()) return Fail(backend.status().ToString());
  auto report =
      CrossValidatePipeline(corpus, config, SyntheticResources(), *backend);
  if (!report.ok()) return Fail(report.status().ToString());
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  const double f1 = report->fold_summary.at("overall_triplet").at("f1").mean;
  const double acc =
      report->fold_summary.at("sentiment_classification").at("accuracy").mean;
  const std::string detail = fmt::format(
      "mean fold overall F1 {:.4f} (>= 0.90), sentiment accuracy {:.4f} "
      "(>= 0.95), {:.1f}s",
      f1, acc, seconds);
  return {f1 >= 0.90 && acc >= 0.95 && seconds < 300, detail};
}

// AC7 -----------------------------------------------------------------------

absl::StatusOr<std::pair<std::string, std::string>> TrainAndEvaluate() {
  PipelineConfig config;
  SyntheticOptions train_options;
  train_options.reviews = 300;
  train_options.seed = 17;
  SyntheticOptions test_options;
  test_options.reviews = 150;
  test_options.seed = 18;
  const Corpus train = GenerateSyntheticCorpus(train_options);
  const Corpus test = GenerateSyntheticCorpus(test_options);
  auto backend = MakeBackend(config);
  if (!backend.ok()) return backend.status();
  auto model =
      PipelineModel::Train(train, config, SyntheticResources(), *backend);
  if (!model.ok()) return model.status();
  auto report = EvaluateModel(*model, test, config.eval.match);
  if (!report.ok()) return report.status();
  nlohmann::ordered_json extracted = nlohmann::ordered_json::array();
  for (const AnnotatedReview& r : test) {
    auto triplets = model->Extract(r.review);
    if (!triplets.ok()) return triplets.status();
    for (const ExtractedTriplet& t : *triplets) {
      extracted.push_back(ExtractedTripletToJson(t));
    }
  }
  return std::pair{ReportToJson(*report).dump(), extracted.dump()};
}

Outcome Determinism() {
  auto a = TrainAndEvaluate();
  auto b = TrainAndEvaluate();
  if (!a.ok()) return Fail(a.status().ToString());
  if (!b.ok()) return Fail(b.status().ToString());
  if (a->first != b->first) return Fail("metrics reports differ");
  if (a->second != b->second) return Fail("extracted triplets differ");
  return {true, fmt::format("reports ({} bytes) and triplets ({} bytes) "
                            "byte-identical",
                            a->first.size(), a->second.size())};
}

// AC8 -----------------------------------------------------------------------

Outcome AdjudicationProperties() {
  std::mt19937_64 rng(8);
  std::vector<Triplet> pool;
  for (size_t a = 0; a < 3; ++a) {
    for (Polarity p : kPolarityOrder) {
      pool.push_back(
          {{a * 10, a * 10 + 3}, {a * 10 + 4, a * 10 + 7}, p, std::nullopt});
    }
  }
  const std::vector<std::string> categories = {"Pricing", "Service"};
  size_t unanimous_seen = 0;
  for (int iter = 0; iter < 1000; ++iter) {
    const size_t n = 2 + rng() % 4;
    std::vector<AnnotationRecord> records(n);
    std::map<Triplet, size_t> votes;
    for (size_t k = 0; k < n; ++k) {
      records[k].annotator_id = fmt::format("a{}", k);
      for (const Triplet& t : pool) {
        if (rng() % 3 == 0) continue;
        Triplet c = t;
        if (rng() % 2) c.category = categories[rng() % 2];
        records[k].triplets.push_back(c);
        ++votes[t];
      }
    }
    auto adj = Adjudicate(records);
    if (!adj.ok()) return Fail(adj.status().ToString());
    const std::set<Triplet> gold(adj->gold.begin(), adj->gold.end());
    const std::set<Triplet> conflicts(adj->conflicts.begin(),
                                      adj->conflicts.end());
    for (const auto& [t, v] : votes) {
      if (v == n) {
        ++unanimous_seen;
        if (!gold.count(t)) return Fail(fmt::format("set {}: unanimous", iter));
      }
      if (2 * v <= n && (!conflicts.count(t) || gold.count(t))) {
        return Fail(fmt::format("set {}: sub-majority not a conflict", iter));
      }
      if (2 * v > n && !gold.count(t)) {
        return Fail(fmt::format("set {}: majority missing from gold", iter));
      }
    }
    for (int perm = 0; perm < 3; ++perm) {
      std::vector<AnnotationRecord> shuffled = records;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      for (AnnotationRecord& r : shuffled) {
        std::shuffle(r.triplets.begin(), r.triplets.end(), rng);
      }
      auto again = Adjudicate(shuffled);
      if (!again.ok()) return Fail(again.status().ToString());
      auto same = [](const std::vector<Triplet>& x,
                     const std::vector<Triplet>& y) {
        if (x.size() != y.size()) return false;
        for (size_t i = 0; i < x.size(); ++i) {
          if (!(x[i] == y[i]) || x[i].category != y[i].category) return false;
        }
        return true;
      };
      if (!same(again->gold, adj->gold) ||
          !same(again->conflicts, adj->conflicts)) {
        return Fail(fmt::format("set {}: order dependent", iter));
      }
    }
  }
  return {true, fmt::format("1000 sets, 2-5 annotators, {} unanimous triplets",
                            unanimous_seen)};
}

}  // namespace
}  // namespace aste

int main() {
  aste::DisableLogging();
  struct Criterion {
    const char* id;
    const char* name;
    double budget_seconds;
    std::function<aste::Outcome()> run;
  };
  const Criterion criteria[] = {
      {"AC1", "metric identities", 1, aste::MetricIdentities},
      {"AC2", "corpus statistics identities", 1, aste::CorpusIdentities},
      {"AC3", "matching oracle", 30, aste::MatchingOracle},
      {"AC4", "span enumeration and NMS", 30, aste::SpanEnumeration},
      {"AC5", "offset alignment", 30, aste::OffsetAlignment},
      {"AC6", "synthetic end-to-end", 300, aste::SyntheticReproduction},
      {"AC7", "determinism", 300, aste::Determinism},
      {"AC8", "adjudication properties", 10, aste::AdjudicationProperties},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    aste::Outcome outcome = c.run();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (seconds > c.budget_seconds) {
      outcome.pass = false;
      outcome.detail += fmt::format("; exceeded {}s budget", c.budget_seconds);
    }
    if (!outcome.pass) ++failures;
    std::printf("[%s] %s %s: %s (%.2fs)\n", outcome.pass ? "PASS" : "FAIL",
                c.id, c.name, outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(std::size(criteria)) - failures,
              std::size(criteria));
  return failures == 0 ? 0 : 1;
}

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

#ifndef ASTE_EVALKIT_H_
#define ASTE_EVALKIT_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "aste/corpus.h"
#include "json.hpp"

namespace aste {

// kExact compares spans by equality. kOverlap accepts any shared code point
// (polarity must still agree where it is compared).
enum class MatchCriterion { kExact, kOverlap };

std::string_view MatchCriterionName(MatchCriterion c);
absl::StatusOr<MatchCriterion> ParseMatchCriterion(std::string_view name);

// Harmonic mean; 0 when p + r = 0.
double F1(double p, double r);

struct PrfCounts {
  size_t tp = 0;
  size_t fp = 0;
  size_t fn = 0;

  PrfCounts& operator+=(const PrfCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const PrfCounts&, const PrfCounts&) = default;
};

struct PrfResult {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  PrfCounts counts;
};

// Both empty -> p = r = f1 = 1. Empty prediction against non-empty gold ->
// p = 0 (and symmetrically r = 0 for empty gold).
PrfResult PrfFromCounts(const PrfCounts& counts);

// Inputs are treated as sets (duplicates collapse). Each prediction may
// consume at most one gold item; predictions are visited in sorted order and
// take the first unmatched gold item satisfying `criterion`.
PrfCounts MatchCounts(std::vector<Span> gold, std::vector<Span> pred,
                      MatchCriterion criterion);
PrfCounts MatchCounts(std::vector<Triplet> gold, std::vector<Triplet> pred,
                      MatchCriterion criterion);

template <typename T>
PrfResult Prf(std::vector<T> gold, std::vector<T> pred,
              MatchCriterion criterion = MatchCriterion::kExact) {
  return PrfFromCounts(
      MatchCounts(std::move(gold), std::move(pred), criterion));
}

inline constexpr std::array<std::string_view, 4> kRowNames = {
    "aspect_term", "opinion_term", "sentiment_classification",
    "overall_triplet"};

std::string_view RowDisplayName(std::string_view row_name);

struct MetricsRow {
  std::string name;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::optional<double> accuracy;
  std::optional<PrfCounts> counts;
  // Sentiment row: number of span-matched pairs the labels were compared on.
  std::optional<size_t> support;

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

// Polarity confusion over span-matched pairs, [gold][predicted].
using Confusion =
    std::array<std::array<size_t, kNumPolarities>, kNumPolarities>;

// Accumulated evidence for the four report rows; summing two tallies and
// then building rows equals pooling the underlying predictions.
struct TripletTally {
  PrfCounts aspect;
  PrfCounts opinion;
  PrfCounts overall;
  Confusion confusion{};

  TripletTally& operator+=(const TripletTally& o);
  std::vector<MetricsRow> Rows() const;
};

// Per-review scoring. Spans on both sides are raw-text offsets.
TripletTally TallyTriplets(const std::vector<Triplet>& gold,
                           const std::vector<Triplet>& pred,
                           MatchCriterion criterion = MatchCriterion::kExact);

// Rows in report order: aspect, opinion, sentiment, overall. The sentiment
// row carries accuracy plus macro precision/recall over the classes that
// occur among matched pairs, and f1 = F1(macro P, macro R). It has no values
// when nothing matched.
std::vector<MetricsRow> ScoreTriplets(
    const std::vector<Triplet>& gold, const std::vector<Triplet>& pred,
    MatchCriterion criterion = MatchCriterion::kExact);

struct GoldAndPrediction {
  std::vector<Triplet> gold;
  std::vector<Triplet> pred;
};

// Micro-averaged over reviews.
TripletTally TallyCorpus(const std::vector<GoldAndPrediction>& reviews,
                         MatchCriterion criterion = MatchCriterion::kExact);

struct MetricSummary {
  double mean = 0.0;
  double stdev = 0.0;  // sample standard deviation over folds

  friend bool operator==(const MetricSummary&, const MetricSummary&) = default;
};

struct FoldDetail {
  int fold = 0;
  size_t train_reviews = 0;
  size_t test_reviews = 0;
  std::vector<MetricsRow> rows;

  friend bool operator==(const FoldDetail&, const FoldDetail&) = default;
};

inline constexpr int kReportSchemaVersion = 1;

struct MetricsReport {
  std::vector<MetricsRow> rows;
  std::vector<FoldDetail> fold_details;
  // row name -> metric name -> summary across folds.
  std::map<std::string, std::map<std::string, MetricSummary>> fold_summary;
  uint64_t seed = 0;
  std::string config_digest;
  MatchCriterion criterion = MatchCriterion::kExact;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

nlohmann::ordered_json ReportToJson(const MetricsReport& report);
absl::StatusOr<MetricsReport> ReportFromJson(const nlohmann::json& j);

// Fixed-width table in report row order with percentages to one decimal.
// Fold sections appear only when fold details exist.
std::string RenderReportTable(const MetricsReport& report);

// "77.4%"; "-" when absent.
std::string FormatPercent(std::optional<double> value);

struct FoldSplit {
  int k = 0;
  std::map<std::string, int> assignment;  // review id -> fold

  // Indices into `corpus` per fold, in corpus order.
  std::vector<std::vector<size_t>> Folds(const Corpus& corpus) const;
};

// Majority polarity of a review's gold triplets (ties follow label order);
// nullopt when there are none.
std::optional<Polarity> MajorityPolarity(const std::vector<Triplet>& gold);

// Stratified by MajorityPolarity. Within each stratum reviews are ordered by
// id, shuffled with `seed`, and dealt round-robin continuing across strata,
// so fold sizes differ by at most one and so do per-stratum counts.
absl::StatusOr<FoldSplit> KFoldSplit(const Corpus& corpus, int k,
                                     uint64_t seed);

// Trains on `train` and returns predicted triplets (raw offsets) for every
// review of `test`, in order.
using FoldRunner =
    std::function<absl::StatusOr<std::vector<std::vector<Triplet>>>(
        const Corpus& train, const Corpus& test, int fold)>;

// Main rows pool every fold's predictions; fold_details holds per-fold rows
// and fold_summary their mean and standard deviation.
absl::StatusOr<MetricsReport> CrossValidate(
    const Corpus& corpus, int k, uint64_t seed, const FoldRunner& runner,
    MatchCriterion criterion = MatchCriterion::kExact);

}  // namespace aste

#endif  // ASTE_EVALKIT_H_

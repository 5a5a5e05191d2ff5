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

#include "aste/evalkit.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "aste/status_macros.h"
#include "fmt/format.h"
#include "fmt/ranges.h"

namespace aste {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

bool Overlaps(const Span& a, const Span& b) {
  return a.start < b.end && b.start < a.end;
}

bool SpanMatch(const Span& a, const Span& b, MatchCriterion c) {
  return c == MatchCriterion::kExact ? a == b : Overlaps(a, b);
}

bool PairMatch(const Triplet& a, const Triplet& b, MatchCriterion c) {
  return SpanMatch(a.aspect, b.aspect, c) && SpanMatch(a.opinion, b.opinion, c);
}

template <typename T>
void SortUnique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

template <typename T, typename Match>
PrfCounts GreedyCounts(std::vector<T> gold, std::vector<T> pred,
                       const Match& match) {
  SortUnique(gold);
  SortUnique(pred);
  std::vector<bool> used(gold.size(), false);
  PrfCounts counts;
  for (const T& p : pred) {
    bool hit = false;
    for (size_t g = 0; g < gold.size() && !hit; ++g) {
      if (!used[g] && match(gold[g], p)) {
        used[g] = true;
        hit = true;
      }
    }
    if (hit) {
      ++counts.tp;
    } else {
      ++counts.fp;
    }
  }
  counts.fn = gold.size() - counts.tp;
  return counts;
}

MetricsRow PrfRow(std::string_view name, const PrfCounts& counts) {
  const PrfResult r = PrfFromCounts(counts);
  MetricsRow row;
  row.name = std::string(name);
  row.precision = r.precision;
  row.recall = r.recall;
  row.f1 = r.f1;
  row.counts = counts;
  return row;
}

MetricsRow SentimentRow(const Confusion& confusion) {
  MetricsRow row;
  row.name = std::string(kRowNames[2]);
  size_t total = 0, correct = 0;
  std::array<size_t, kNumPolarities> gold{}, pred{};
  for (int g = 0; g < kNumPolarities; ++g) {
    for (int p = 0; p < kNumPolarities; ++p) {
      total += confusion[g][p];
      gold[g] += confusion[g][p];
      pred[p] += confusion[g][p];
    }
    correct += confusion[g][g];
  }
  row.support = total;
  if (total == 0) return row;
  double p_sum = 0.0, r_sum = 0.0;
  int classes = 0;
  for (int c = 0; c < kNumPolarities; ++c) {
    if (gold[c] == 0 && pred[c] == 0) continue;
    ++classes;
    const double tp = static_cast<double>(confusion[c][c]);
    p_sum += pred[c] ? tp / static_cast<double>(pred[c]) : 0.0;
    r_sum += gold[c] ? tp / static_cast<double>(gold[c]) : 0.0;
  }
  row.accuracy = static_cast<double>(correct) / static_cast<double>(total);
  row.precision = p_sum / classes;
  row.recall = r_sum / classes;
  row.f1 = F1(*row.precision, *row.recall);
  return row;
}

ojson RowToJson(const MetricsRow& row) {
  ojson j;
  j["name"] = row.name;
  if (row.precision) j["precision"] = *row.precision;
  if (row.recall) j["recall"] = *row.recall;
  if (row.f1) j["f1"] = *row.f1;
  if (row.accuracy) j["accuracy"] = *row.accuracy;
  if (row.counts) {
    j["tp"] = row.counts->tp;
    j["fp"] = row.counts->fp;
    j["fn"] = row.counts->fn;
  }
  if (row.support) j["support"] = *row.support;
  return j;
}

MetricsRow RowFromJson(const json& j) {
  MetricsRow row;
  row.name = j.at("name").get<std::string>();
  auto opt = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key)) return std::nullopt;
    return j[key].get<double>();
  };
  row.precision = opt("precision");
  row.recall = opt("recall");
  row.f1 = opt("f1");
  row.accuracy = opt("accuracy");
  if (j.contains("tp")) {
    row.counts = PrfCounts{j.at("tp").get<size_t>(), j.at("fp").get<size_t>(),
                           j.at("fn").get<size_t>()};
  }
  if (j.contains("support")) row.support = j["support"].get<size_t>();
  return row;
}

ojson RowsToJson(const std::vector<MetricsRow>& rows) {
  ojson arr = ojson::array();
  for (const MetricsRow& row : rows) arr.push_back(RowToJson(row));
  return arr;
}

std::vector<MetricsRow> RowsFromJson(const json& arr) {
  std::vector<MetricsRow> rows;
  for (const json& j : arr) rows.push_back(RowFromJson(j));
  return rows;
}

std::string RenderRows(const std::vector<MetricsRow>& rows) {
  const std::array<std::string, 4> headers = {"P", "R", "F1", "Acc"};
  std::vector<std::array<std::string, 4>> cells;
  std::array<size_t, 4> width;
  for (size_t c = 0; c < 4; ++c) width[c] = headers[c].size();
  size_t name_width = 4;
  for (const MetricsRow& row : rows) {
    cells.push_back({FormatPercent(row.precision), FormatPercent(row.recall),
                     FormatPercent(row.f1), FormatPercent(row.accuracy)});
    for (size_t c = 0; c < 4; ++c) {
      width[c] = std::max(width[c], cells.back()[c].size());
    }
    name_width = std::max(name_width, RowDisplayName(row.name).size());
  }
  std::string out = fmt::format("{:<{}}", "Task", name_width);
  for (size_t c = 0; c < 4; ++c) {
    out += fmt::format(" {:>{}}", headers[c], width[c]);
  }
  out += '\n';
  for (size_t r = 0; r < rows.size(); ++r) {
    out += fmt::format("{:<{}}", RowDisplayName(rows[r].name), name_width);
    for (size_t c = 0; c < 4; ++c) {
      out += fmt::format(" {:>{}}", cells[r][c], width[c]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace

std::string_view MatchCriterionName(MatchCriterion c) {
  return c == MatchCriterion::kExact ? "exact" : "overlap";
}

absl::StatusOr<MatchCriterion> ParseMatchCriterion(std::string_view name) {
  if (name == "exact") return MatchCriterion::kExact;
  if (name == "overlap") return MatchCriterion::kOverlap;
  return absl::InvalidArgumentError(fmt::format(
      "unknown match criterion '{}' (expected exact or overlap)", name));
}

double F1(double p, double r) {
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

PrfResult PrfFromCounts(const PrfCounts& counts) {
  PrfResult r;
  r.counts = counts;
  const size_t predicted = counts.tp + counts.fp;
  const size_t gold = counts.tp + counts.fn;
  if (predicted == 0 && gold == 0) {
    r.precision = r.recall = r.f1 = 1.0;
    return r;
  }
  r.precision = predicted ? static_cast<double>(counts.tp) /
                                static_cast<double>(predicted)
                          : 0.0;
  r.recall =
      gold ? static_cast<double>(counts.tp) / static_cast<double>(gold) : 0.0;
  r.f1 = F1(r.precision, r.recall);
  return r;
}

PrfCounts MatchCounts(std::vector<Span> gold, std::vector<Span> pred,
                      MatchCriterion criterion) {
  return GreedyCounts(std::move(gold), std::move(pred),
                      [criterion](const Span& g, const Span& p) {
                        return SpanMatch(g, p, criterion);
                      });
}

PrfCounts MatchCounts(std::vector<Triplet> gold, std::vector<Triplet> pred,
                      MatchCriterion criterion) {
  return GreedyCounts(std::move(gold), std::move(pred),
                      [criterion](const Triplet& g, const Triplet& p) {
                        return g.polarity == p.polarity &&
                               PairMatch(g, p, criterion);
                      });
}

std::string_view RowDisplayName(std::string_view row_name) {
  if (row_name == kRowNames[0]) return "Aspect Term Extraction";
  if (row_name == kRowNames[1]) return "Opinion Term Extraction";
  if (row_name == kRowNames[2]) return "Sentiment Classification";
  if (row_name == kRowNames[3]) return "Overall Triplet Extraction";
  return row_name;
}

TripletTally& TripletTally::operator+=(const TripletTally& o) {
  aspect += o.aspect;
  opinion += o.opinion;
  overall += o.overall;
  for (int g = 0; g < kNumPolarities; ++g) {
    for (int p = 0; p < kNumPolarities; ++p) {
      confusion[g][p] += o.confusion[g][p];
    }
  }
  return *this;
}

std::vector<MetricsRow> TripletTally::Rows() const {
  return {PrfRow(kRowNames[0], aspect), PrfRow(kRowNames[1], opinion),
          SentimentRow(confusion), PrfRow(kRowNames[3], overall)};
}

TripletTally TallyTriplets(const std::vector<Triplet>& gold,
                           const std::vector<Triplet>& pred,
                           MatchCriterion criterion) {
  TripletTally tally;
  std::vector<Span> gold_aspects, pred_aspects, gold_opinions, pred_opinions;
  for (const Triplet& t : gold) {
    gold_aspects.push_back(t.aspect);
    gold_opinions.push_back(t.opinion);
  }
  for (const Triplet& t : pred) {
    pred_aspects.push_back(t.aspect);
    pred_opinions.push_back(t.opinion);
  }
  tally.aspect = MatchCounts(gold_aspects, pred_aspects, criterion);
  tally.opinion = MatchCounts(gold_opinions, pred_opinions, criterion);
  tally.overall = MatchCounts(gold, pred, criterion);

  std::vector<Triplet> g = gold, p = pred;
  SortUnique(g);
  SortUnique(p);
  std::vector<bool> used(g.size(), false);
  std::set<std::pair<Span, Span>> seen_pairs;
  for (const Triplet& t : p) {
    if (!seen_pairs.insert({t.aspect, t.opinion}).second) continue;
    for (size_t i = 0; i < g.size(); ++i) {
      if (!used[i] && PairMatch(g[i], t, criterion)) {
        used[i] = true;
        ++tally.confusion[static_cast<int>(g[i].polarity)]
                         [static_cast<int>(t.polarity)];
        break;
      }
    }
  }
  return tally;
}

std::vector<MetricsRow> ScoreTriplets(const std::vector<Triplet>& gold,
                                      const std::vector<Triplet>& pred,
                                      MatchCriterion criterion) {
  return TallyTriplets(gold, pred, criterion).Rows();
}

TripletTally TallyCorpus(const std::vector<GoldAndPrediction>& reviews,
                         MatchCriterion criterion) {
  TripletTally total;
  for (const GoldAndPrediction& r : reviews) {
    total += TallyTriplets(r.gold, r.pred, criterion);
  }
  return total;
}

std::string FormatPercent(std::optional<double> value) {
  if (!value) return "-";
  return fmt::format("{:.1f}%", *value * 100.0);
}

ojson ReportToJson(const MetricsReport& report) {
  ojson j;
  j["schema_version"] = kReportSchemaVersion;
  j["config_digest"] = report.config_digest;
  j["seed"] = report.seed;
  j["criterion"] = MatchCriterionName(report.criterion);
  j["rows"] = RowsToJson(report.rows);
  ojson folds = ojson::array();
  for (const FoldDetail& f : report.fold_details) {
    ojson fj;
    fj["fold"] = f.fold;
    fj["train_reviews"] = f.train_reviews;
    fj["test_reviews"] = f.test_reviews;
    fj["rows"] = RowsToJson(f.rows);
    folds.push_back(std::move(fj));
  }
  j["fold_details"] = std::move(folds);
  ojson summary = ojson::object();
  for (const auto& [row, metrics] : report.fold_summary) {
    ojson mj = ojson::object();
    for (const auto& [metric, s] : metrics) {
      mj[metric] = {{"mean", s.mean}, {"stdev", s.stdev}};
    }
    summary[row] = std::move(mj);
  }
  j["fold_summary"] = std::move(summary);
  return j;
}

absl::StatusOr<MetricsReport> ReportFromJson(const json& j) {
  try {
    if (j.at("schema_version").get<int>() != kReportSchemaVersion) {
      return absl::InvalidArgumentError("unsupported report schema_version");
    }
    MetricsReport report;
    report.config_digest = j.at("config_digest").get<std::string>();
    report.seed = j.at("seed").get<uint64_t>();
    ASSIGN_OR_RETURN(report.criterion,
                     ParseMatchCriterion(j.at("criterion").get<std::string>()));
    report.rows = RowsFromJson(j.at("rows"));
    for (const json& fj : j.at("fold_details")) {
      FoldDetail f;
      f.fold = fj.at("fold").get<int>();
      f.train_reviews = fj.at("train_reviews").get<size_t>();
      f.test_reviews = fj.at("test_reviews").get<size_t>();
      f.rows = RowsFromJson(fj.at("rows"));
      report.fold_details.push_back(std::move(f));
    }
    for (const auto& [row, metrics] : j.at("fold_summary").items()) {
      for (const auto& [metric, s] : metrics.items()) {
        report.fold_summary[row][metric] = {s.at("mean").get<double>(),
                                            s.at("stdev").get<double>()};
      }
    }
    return report;
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        fmt::format("malformed metrics report: {}", e.what()));
  }
}

std::string RenderReportTable(const MetricsReport& report) {
  std::string out = fmt::format(
      "Triplet extraction metrics (criterion {}, seed {})\nconfig digest: "
      "{}\n\n",
      MatchCriterionName(report.criterion), report.seed,
      report.config_digest.empty() ? "-" : report.config_digest);
  out += RenderRows(report.rows);
  for (const FoldDetail& f : report.fold_details) {
    out += fmt::format("\nFold {} (train {}, test {})\n", f.fold + 1,
                       f.train_reviews, f.test_reviews);
    out += RenderRows(f.rows);
  }
  if (!report.fold_summary.empty()) {
    out += "\nAcross folds (mean ± stdev)\n";
    for (std::string_view row : kRowNames) {
      auto it = report.fold_summary.find(std::string(row));
      if (it == report.fold_summary.end()) continue;
      std::vector<std::string> parts;
      for (const char* metric : {"precision", "recall", "f1", "accuracy"}) {
        auto m = it->second.find(metric);
        if (m == it->second.end()) continue;
        parts.push_back(fmt::format("{} {} ± {}", metric,
                                    FormatPercent(m->second.mean),
                                    FormatPercent(m->second.stdev)));
      }
      out +=
          fmt::format("{}: {}\n", RowDisplayName(row), fmt::join(parts, ", "));
    }
  }
  out +=
      "\nP = precision, R = recall, Acc = sentiment accuracy over "
      "span-matched pairs\n";
  return out;
}

std::vector<std::vector<size_t>> FoldSplit::Folds(const Corpus& corpus) const {
  std::vector<std::vector<size_t>> folds(k);
  for (size_t i = 0; i < corpus.size(); ++i) {
    auto it = assignment.find(corpus[i].review.id);
    if (it != assignment.end()) folds[it->second].push_back(i);
  }
  return folds;
}

std::optional<Polarity> MajorityPolarity(const std::vector<Triplet>& gold) {
  if (gold.empty()) return std::nullopt;
  std::array<size_t, kNumPolarities> counts{};
  for (const Triplet& t : gold) ++counts[static_cast<int>(t.polarity)];
  int best = 0;
  for (int c = 1; c < kNumPolarities; ++c) {
    if (counts[c] > counts[best]) best = c;
  }
  return kPolarityOrder[best];
}

absl::StatusOr<FoldSplit> KFoldSplit(const Corpus& corpus, int k,
                                     uint64_t seed) {
  if (k < 2) return absl::InvalidArgumentError("k must be at least 2");
  if (corpus.size() < static_cast<size_t>(k)) {
    return absl::InvalidArgumentError(
        fmt::format("cannot split {} reviews into {} folds", corpus.size(), k));
  }
  // Stratum kNumPolarities holds reviews without gold triplets.
  std::vector<std::vector<std::string>> strata(kNumPolarities + 1);
  for (const AnnotatedReview& r : corpus) {
    const auto majority =
        r.gold ? MajorityPolarity(*r.gold) : std::optional<Polarity>();
    strata[majority ? static_cast<int>(*majority) : kNumPolarities].push_back(
        r.review.id);
  }
  FoldSplit split;
  split.k = k;
  std::mt19937_64 rng(seed);
  size_t position = 0;
  for (auto& ids : strata) {
    std::sort(ids.begin(), ids.end());
    for (size_t i = ids.size(); i > 1; --i) {
      std::swap(ids[i - 1], ids[rng() % i]);
    }
    for (const std::string& id : ids) {
      if (!split.assignment.emplace(id, static_cast<int>(position % k))
               .second) {
        return absl::InvalidArgumentError(
            fmt::format("duplicate review id '{}'", id));
      }
      ++position;
    }
  }
  return split;
}

absl::StatusOr<MetricsReport> CrossValidate(const Corpus& corpus, int k,
                                            uint64_t seed,
                                            const FoldRunner& runner,
                                            MatchCriterion criterion) {
  std::vector<std::string> missing;
  for (const AnnotatedReview& r : corpus) {
    if (!r.gold) missing.push_back(r.review.id);
  }
  if (!missing.empty()) {
    return absl::FailedPreconditionError(
        fmt::format("corpus is not adjudicated; reviews without gold: {}",
                    fmt::join(missing, ", ")));
  }
  ASSIGN_OR_RETURN(FoldSplit split, KFoldSplit(corpus, k, seed));
  const auto folds = split.Folds(corpus);
  MetricsReport report;
  report.seed = seed;
  report.criterion = criterion;
  TripletTally pooled;
  for (int f = 0; f < k; ++f) {
    Corpus train, test;
    for (int other = 0; other < k; ++other) {
      for (size_t i : folds[other]) {
        (other == f ? test : train).push_back(corpus[i]);
      }
    }
    auto predictions = runner(train, test, f);
    if (!predictions.ok()) {
      return absl::Status(
          predictions.status().code(),
          fmt::format("fold {}: {}", f + 1,
                      std::string(predictions.status().message())));
    }
    if (predictions->size() != test.size()) {
      return absl::InternalError(
          fmt::format("fold {}: {} predictions for {} test reviews", f + 1,
                      predictions->size(), test.size()));
    }
    TripletTally tally;
    for (size_t i = 0; i < test.size(); ++i) {
      tally += TallyTriplets(*test[i].gold, (*predictions)[i], criterion);
    }
    pooled += tally;
    report.fold_details.push_back({f, train.size(), test.size(), tally.Rows()});
  }
  report.rows = pooled.Rows();

  for (size_t r = 0; r < kRowNames.size(); ++r) {
    for (const char* metric : {"precision", "recall", "f1", "accuracy"}) {
      std::vector<double> values;
      for (const FoldDetail& fd : report.fold_details) {
        const MetricsRow& row = fd.rows[r];
        const std::string_view m(metric);
        const std::optional<double> v = m == "precision" ? row.precision
                                        : m == "recall"  ? row.recall
                                        : m == "f1"      ? row.f1
                                                         : row.accuracy;
        if (v) values.push_back(*v);
      }
      if (values.empty()) continue;
      MetricSummary s;
      for (double v : values) s.mean += v;
      s.mean /= static_cast<double>(values.size());
      if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.stdev = std::sqrt(ss / static_cast<double>(values.size() - 1));
      }
      report.fold_summary[std::string(kRowNames[r])][metric] = s;
    }
  }
  return report;
}

}  // namespace aste

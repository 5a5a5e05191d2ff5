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
#include <random>

#include "aste/file_util.h"
#include "aste/hashing.h"
#include "aste/status_macros.h"
#include "aste/unicode.h"
#include "fmt/format.h"

namespace aste {
namespace {

using json = nlohmann::json;

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::u32string SpanString(const TokenizedText& text, TokenInterval span) {
  const CharRange r = text.TokenRange(span.first, span.last);
  return text.normalized.substr(r.start, r.size());
}

std::u32string TokenString(const TokenizedText& text, size_t i) {
  return std::u32string(text.TokenView(i));
}

// Greedy suppression order: higher score, then earlier start, then shorter.
bool RanksBefore(const CandidateSpan& a, const CandidateSpan& b,
                 SpanRole role) {
  if (a.score(role) != b.score(role)) return a.score(role) > b.score(role);
  if (a.span.first != b.span.first) return a.span.first < b.span.first;
  return a.span.last < b.span.last;
}

json SparseWeightsToJson(const std::vector<double>& weights) {
  json arr = json::array();
  for (size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] != 0.0) arr.push_back({i, weights[i]});
  }
  return arr;
}

absl::StatusOr<std::vector<double>> SparseWeightsFromJson(const json& arr,
                                                          size_t size) {
  if (!arr.is_array()) {
    return absl::InvalidArgumentError("scorer weights must be an array");
  }
  std::vector<double> weights(size, 0.0);
  for (const json& entry : arr) {
    if (!entry.is_array() || entry.size() != 2 ||
        !entry[0].is_number_unsigned() || !entry[1].is_number()) {
      return absl::InvalidArgumentError("malformed scorer weight entry");
    }
    const size_t index = entry[0].get<size_t>();
    if (index >= size) {
      return absl::InvalidArgumentError("scorer weight index out of range");
    }
    weights[index] = entry[1].get<double>();
  }
  return weights;
}

}  // namespace

std::vector<TokenInterval> EnumerateSpans(size_t n, size_t max_len) {
  std::vector<TokenInterval> out;
  out.reserve(SpanCount(n, max_len));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i; j < n && j - i + 1 <= max_len; ++j) {
      out.push_back({i, j});
    }
  }
  return out;
}

size_t SpanCount(size_t n, size_t max_len) {
  size_t count = 0;
  for (size_t w = 1; w <= std::min(n, max_len); ++w) count += n - w + 1;
  return count;
}

std::vector<TokenInterval> DropStopwordEdges(
    const TokenizedText& text, const std::vector<TokenInterval>& spans) {
  std::vector<TokenInterval> out;
  for (const TokenInterval& s : spans) {
    if (text.tokens[s.first].is_stopword || text.tokens[s.last].is_stopword) {
      continue;
    }
    out.push_back(s);
  }
  return out;
}

TermLexicon::TermLexicon(const std::vector<std::string>& terms) {
  for (const std::string& term : terms) {
    std::u32string normalized = Normalize(std::string_view(term), {}).text;
    if (!normalized.empty()) terms_.insert(std::move(normalized));
  }
}

absl::StatusOr<TermLexicon> TermLexicon::Parse(std::string_view content) {
  if (const auto bad = FindInvalidUtf8(content)) {
    return absl::InvalidArgumentError(
        fmt::format("seed lexicon: invalid UTF-8 at byte offset {}", *bad));
  }
  std::vector<std::string> terms;
  for (std::string_view line : SplitLines(content)) {
    line = StripWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    terms.emplace_back(line);
  }
  return TermLexicon(terms);
}

absl::StatusOr<TermLexicon> TermLexicon::Load(const std::string& path) {
  ASSIGN_OR_RETURN(std::string content, ReadFile(path));
  return Parse(content);
}

std::vector<std::string> TermLexicon::Terms() const {
  std::vector<std::string> out;
  for (const auto& t : terms_) out.push_back(EncodeUtf8(t));
  return out;
}

absl::StatusOr<std::pair<double, double>> ConstantSpanScorer::Score(
    const ScoringInput&, TokenInterval) const {
  return std::pair{aspect_, opinion_};
}

json ConstantSpanScorer::ToJson() const {
  return {{"type", "constant"}, {"aspect", aspect_}, {"opinion", opinion_}};
}

absl::StatusOr<std::pair<double, double>> LexiconSpanScorer::Score(
    const ScoringInput& input, TokenInterval span) const {
  const TokenizedText& text = *input.text;
  const std::u32string full = SpanString(text, span);
  const std::u32string head = TokenString(text, span.last);
  auto contains_term = [&](const TermLexicon& lexicon) {
    for (size_t a = span.first; a <= span.last; ++a) {
      for (size_t b = a; b <= span.last; ++b) {
        if (lexicon.Contains(SpanString(text, {a, b}))) return true;
      }
    }
    return false;
  };
  auto role_score = [&](const TermLexicon& own, const TermLexicon& other) {
    if (own.Contains(full)) return 1.0;
    return own.Contains(head) && !contains_term(other) ? 1.0 : 0.0;
  };
  return std::pair{role_score(aspects_, opinions_),
                   role_score(opinions_, aspects_)};
}

json LexiconSpanScorer::ToJson() const {
  return {{"type", "lexicon"},
          {"aspect_lexicon", aspects_.Terms()},
          {"opinion_lexicon", opinions_.Terms()}};
}

LogisticSpanScorer::LogisticSpanScorer(LogisticScorerConfig config,
                                       TermLexicon aspects,
                                       TermLexicon opinions,
                                       size_t embedding_dim)
    : config_(config),
      aspects_(std::move(aspects)),
      opinions_(std::move(opinions)),
      embedding_dim_(embedding_dim) {
  aspect_.weights.assign(num_features(), 0.0);
  opinion_.weights.assign(num_features(), 0.0);
}

SparseFeatures LogisticSpanScorer::Features(const ScoringInput& input,
                                            TokenInterval span) const {
  const TokenizedText& text = *input.text;
  const uint32_t mask = (uint32_t{1} << config_.hash_bits) - 1;
  SparseFeatures features;
  auto add = [&](const std::string& name, double value = 1.0) {
    features.emplace_back(
        static_cast<uint32_t>(SeededHash(name, config_.seed) & mask), value);
  };

  bool has_stopword = false;
  bool any_aspect = false;
  bool any_opinion = false;
  for (size_t k = span.first; k <= span.last; ++k) {
    const std::u32string token = TokenString(text, k);
    const std::string utf8 = EncodeUtf8(token);
    add("w=" + utf8);
    if (k == span.first) add("wf=" + utf8);
    if (k == span.last) add("wl=" + utf8);
    const std::u32string marked = U"<" + token + U">";
    for (size_t n = 2; n <= 4; ++n) {
      for (size_t s = 0; s + n <= marked.size(); ++s) {
        add("g=" + EncodeUtf8(std::u32string_view(marked).substr(s, n)));
      }
    }
    has_stopword |= text.tokens[k].is_stopword;
    any_aspect |= aspects_.Contains(token);
    any_opinion |= opinions_.Contains(token);
  }
  add(fmt::format("len={}", std::min<size_t>(span.length(), 5)));
  add(span.first == 0 ? std::string("prev=<s>")
                      : "prev=" + text.TokenText(span.first - 1));
  add(span.last + 1 >= text.size() ? std::string("next=</s>")
                                   : "next=" + text.TokenText(span.last + 1));
  if (has_stopword) add("stop_in");

  const std::u32string full = SpanString(text, span);
  const std::u32string head = TokenString(text, span.last);
  if (aspects_.Contains(full)) add("lex:a:full");
  if (aspects_.Contains(head)) add("lex:a:head");
  if (any_aspect) add("lex:a:any");
  if (opinions_.Contains(full)) add("lex:o:full");
  if (opinions_.Contains(head)) add("lex:o:head");
  if (any_opinion) add("lex:o:any");

  std::sort(features.begin(), features.end());
  SparseFeatures merged;
  for (const auto& [index, value] : features) {
    if (!merged.empty() && merged.back().first == index) {
      merged.back().second += value;
    } else {
      merged.emplace_back(index, value);
    }
  }
  if (embedding_dim_ > 0 && input.token_vectors != nullptr) {
    const Vector pooled = MeanPool(*input.token_vectors, span.first, span.last);
    const uint32_t base = uint32_t{1} << config_.hash_bits;
    for (size_t c = 0; c < embedding_dim_ && c < pooled.size(); ++c) {
      merged.emplace_back(base + static_cast<uint32_t>(c), pooled[c]);
    }
  }
  return merged;
}

absl::StatusOr<LogisticSpanScorer> LogisticSpanScorer::Train(
    const std::vector<SpanExample>& examples, TermLexicon aspects,
    TermLexicon opinions, const LogisticScorerConfig& config) {
  if (config.hash_bits < 8 || config.hash_bits > 24) {
    return absl::InvalidArgumentError("hash_bits must be in [8, 24]");
  }
  if (config.epochs < 1 || config.learning_rate <= 0.0 || config.l2 < 0.0) {
    return absl::InvalidArgumentError("invalid span scorer training config");
  }
  size_t embedding_dim = 0;
  if (config.use_embeddings) {
    for (const SpanExample& ex : examples) {
      if (ex.token_vectors == nullptr || ex.token_vectors->empty()) {
        return absl::InvalidArgumentError(
            "embedding features requested but an example has no vectors");
      }
      embedding_dim = ex.token_vectors->front().size();
      break;
    }
  }
  LogisticSpanScorer scorer(config, std::move(aspects), std::move(opinions),
                            embedding_dim);
  size_t pos_aspect = 0;
  size_t pos_opinion = 0;
  std::vector<SparseFeatures> features;
  features.reserve(examples.size());
  for (const SpanExample& ex : examples) {
    if (ex.text == nullptr || ex.span.last >= ex.text->size()) {
      return absl::InvalidArgumentError("span example outside its text");
    }
    features.push_back(scorer.Features({ex.text, ex.token_vectors}, ex.span));
    pos_aspect += ex.is_aspect;
    pos_opinion += ex.is_opinion;
  }
  if (pos_aspect == 0 || pos_opinion == 0) {
    return absl::FailedPreconditionError(
        "span scorer needs at least one aspect and one opinion example");
  }
  auto positive_weight = [&](size_t positives) {
    if (!config.balance_classes) return 1.0;
    const double negatives = static_cast<double>(examples.size() - positives);
    return std::max(1.0, negatives / static_cast<double>(positives));
  };
  const double w_aspect = positive_weight(pos_aspect);
  const double w_opinion = positive_weight(pos_opinion);

  // AdaGrad keeps the step size sane for both frequent and rare buckets.
  constexpr double kEps = 1e-8;
  struct Accumulators {
    double bias = 0.0;
    std::vector<double> weights;
  };
  Accumulators acc_aspect{0.0, std::vector<double>(scorer.num_features())};
  Accumulators acc_opinion{0.0, std::vector<double>(scorer.num_features())};
  auto update = [&](RoleModel& model, Accumulators& acc,
                    const SparseFeatures& x, double label, double weight) {
    double z = model.bias;
    for (const auto& [i, v] : x) z += model.weights[i] * v;
    const double g = (Sigmoid(z) - label) * weight;
    acc.bias += g * g;
    model.bias -= config.learning_rate * g / std::sqrt(acc.bias + kEps);
    for (const auto& [i, v] : x) {
      const double gi = g * v + config.l2 * model.weights[i];
      acc.weights[i] += gi * gi;
      model.weights[i] -=
          config.learning_rate * gi / std::sqrt(acc.weights[i] + kEps);
    }
  };

  std::vector<size_t> order(examples.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(config.seed);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    // Fisher-Yates with an explicit modulus keeps the order identical across
    // standard library implementations.
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng() % i]);
    }
    for (size_t idx : order) {
      const SpanExample& ex = examples[idx];
      update(scorer.aspect_, acc_aspect, features[idx],
             ex.is_aspect ? 1.0 : 0.0, ex.is_aspect ? w_aspect : 1.0);
      update(scorer.opinion_, acc_opinion, features[idx],
             ex.is_opinion ? 1.0 : 0.0, ex.is_opinion ? w_opinion : 1.0);
    }
  }
  return scorer;
}

absl::StatusOr<std::pair<double, double>> LogisticSpanScorer::Score(
    const ScoringInput& input, TokenInterval span) const {
  if (input.text == nullptr || span.first > span.last ||
      span.last >= input.text->size()) {
    return absl::OutOfRangeError("span outside text");
  }
  if (embedding_dim_ > 0 &&
      (input.token_vectors == nullptr ||
       input.token_vectors->size() != input.text->size() ||
       input.token_vectors->front().size() != embedding_dim_)) {
    return absl::FailedPreconditionError(
        "scorer expects token vectors matching its embedding dimension");
  }
  const SparseFeatures x = Features(input, span);
  double za = aspect_.bias;
  double zo = opinion_.bias;
  for (const auto& [i, v] : x) {
    za += aspect_.weights[i] * v;
    zo += opinion_.weights[i] * v;
  }
  return std::pair{Sigmoid(za), Sigmoid(zo)};
}

json LogisticSpanScorer::ToJson() const {
  json j;
  j["type"] = "logistic";
  j["hash_bits"] = config_.hash_bits;
  j["seed"] = config_.seed;
  j["epochs"] = config_.epochs;
  j["learning_rate"] = config_.learning_rate;
  j["l2"] = config_.l2;
  j["balance_classes"] = config_.balance_classes;
  j["use_embeddings"] = config_.use_embeddings;
  j["embedding_dim"] = embedding_dim_;
  j["aspect_lexicon"] = aspects_.Terms();
  j["opinion_lexicon"] = opinions_.Terms();
  j["aspect"] = {{"bias", aspect_.bias},
                 {"weights", SparseWeightsToJson(aspect_.weights)}};
  j["opinion"] = {{"bias", opinion_.bias},
                  {"weights", SparseWeightsToJson(opinion_.weights)}};
  return j;
}

absl::StatusOr<LogisticSpanScorer> LogisticSpanScorer::FromJson(const json& j) {
  try {
    LogisticScorerConfig config;
    config.hash_bits = j.at("hash_bits").get<int>();
    config.seed = j.at("seed").get<uint64_t>();
    config.epochs = j.at("epochs").get<int>();
    config.learning_rate = j.at("learning_rate").get<double>();
    config.l2 = j.at("l2").get<double>();
    config.balance_classes = j.at("balance_classes").get<bool>();
    config.use_embeddings = j.at("use_embeddings").get<bool>();
    if (config.hash_bits < 8 || config.hash_bits > 24) {
      return absl::InvalidArgumentError("hash_bits must be in [8, 24]");
    }
    LogisticSpanScorer scorer(
        config,
        TermLexicon(j.at("aspect_lexicon").get<std::vector<std::string>>()),
        TermLexicon(j.at("opinion_lexicon").get<std::vector<std::string>>()),
        j.at("embedding_dim").get<size_t>());
    scorer.aspect_.bias = j.at("aspect").at("bias").get<double>();
    ASSIGN_OR_RETURN(scorer.aspect_.weights,
                     SparseWeightsFromJson(j.at("aspect").at("weights"),
                                           scorer.num_features()));
    scorer.opinion_.bias = j.at("opinion").at("bias").get<double>();
    ASSIGN_OR_RETURN(scorer.opinion_.weights,
                     SparseWeightsFromJson(j.at("opinion").at("weights"),
                                           scorer.num_features()));
    return scorer;
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        fmt::format("malformed logistic span scorer: {}", e.what()));
  }
}

absl::StatusOr<std::unique_ptr<SpanScorer>> SpanScorerFromJson(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    return absl::InvalidArgumentError("span scorer needs a 'type'");
  }
  const std::string type = j["type"].get<std::string>();
  try {
    if (type == "constant") {
      return std::make_unique<ConstantSpanScorer>(
          j.at("aspect").get<double>(), j.at("opinion").get<double>());
    }
    if (type == "lexicon") {
      return std::make_unique<LexiconSpanScorer>(
          TermLexicon(j.at("aspect_lexicon").get<std::vector<std::string>>()),
          TermLexicon(j.at("opinion_lexicon").get<std::vector<std::string>>()));
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        fmt::format("malformed {} span scorer: {}", type, e.what()));
  }
  if (type == "logistic") {
    ASSIGN_OR_RETURN(LogisticSpanScorer scorer,
                     LogisticSpanScorer::FromJson(j));
    return std::make_unique<LogisticSpanScorer>(std::move(scorer));
  }
  return absl::InvalidArgumentError(
      fmt::format("unknown span scorer type '{}'", type));
}

absl::StatusOr<std::vector<CandidateSpan>> ScoreSpans(
    const ScoringInput& input, const std::vector<TokenInterval>& spans,
    const SpanScorer& scorer) {
  std::vector<CandidateSpan> out;
  out.reserve(spans.size());
  for (const TokenInterval& span : spans) {
    auto scores = scorer.Score(input, span);
    if (!scores.ok()) {
      return absl::Status(
          scores.status().code(),
          fmt::format("scoring span [{}, {}]: {}", span.first, span.last,
                      std::string(scores.status().message())));
    }
    out.push_back({span, scores->first, scores->second});
  }
  return out;
}

std::vector<CandidateSpan> Prune(const std::vector<CandidateSpan>& candidates,
                                 SpanRole role, double threshold,
                                 size_t top_k) {
  std::vector<CandidateSpan> ranked;
  for (const CandidateSpan& c : candidates) {
    if (c.score(role) >= threshold) ranked.push_back(c);
  }
  std::sort(ranked.begin(), ranked.end(),
            [role](const CandidateSpan& a, const CandidateSpan& b) {
              return RanksBefore(a, b, role);
            });
  std::vector<CandidateSpan> kept;
  for (const CandidateSpan& c : ranked) {
    if (kept.size() >= top_k) break;
    const bool suppressed = std::any_of(
        kept.begin(), kept.end(),
        [&](const CandidateSpan& k) { return k.span.Overlaps(c.span); });
    if (!suppressed) kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end(),
            [](const CandidateSpan& a, const CandidateSpan& b) {
              return a.span < b.span;
            });
  return kept;
}

}  // namespace aste

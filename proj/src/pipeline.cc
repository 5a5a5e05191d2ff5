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

#include "aste/pipeline.h"

#include <algorithm>
#include <set>

#include "aste/logging.h"
#include "aste/pairmatch.h"
#include "aste/status_macros.h"
#include "aste/unicode.h"
#include "fmt/format.h"

namespace aste {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

absl::Status WithReview(const absl::Status& status, std::string_view id) {
  return absl::Status(
      status.code(),
      fmt::format("review '{}': {}", id, std::string(status.message())));
}

std::vector<TokenInterval> CandidateIntervals(const TokenizedText& text,
                                              size_t max_len) {
  return DropStopwordEdges(text, EnumerateSpans(text.size(), max_len));
}

bool Reachable(const TokenizedText& text, TokenInterval span, size_t max_len) {
  return span.length() <= max_len && !text.tokens[span.first].is_stopword &&
         !text.tokens[span.last].is_stopword;
}

struct AlignedTriplet {
  TokenInterval aspect;
  TokenInterval opinion;
  Polarity polarity;
};

struct PreparedReview {
  const AnnotatedReview* source = nullptr;
  TokenizedText text;
  TokenMatrix vectors;
  std::vector<AlignedTriplet> gold;
};

absl::StatusOr<Vector> PairFeatures(const TokenMatrix& vectors,
                                    TokenInterval aspect, TokenInterval opinion,
                                    const MatchPolicy& policy,
                                    double* edge_weight) {
  ASSIGN_OR_RETURN(double cos,
                   Cosine(MeanPool(vectors, aspect.first, aspect.last),
                          MeanPool(vectors, opinion.first, opinion.last)));
  const double w = EdgeWeight(cos, TokenGap(aspect, opinion), policy);
  if (edge_weight != nullptr) *edge_weight = w;
  return FeaturizePair(vectors, aspect, opinion, w);
}

}  // namespace

absl::StatusOr<PipelineResources> PipelineResources::Load(
    const PipelineConfig::Paths& paths) {
  PipelineResources r;
  if (!paths.spelling_lexicon.empty()) {
    ASSIGN_OR_RETURN(r.spelling, SpellingLexicon::Load(paths.spelling_lexicon));
  }
  if (!paths.stopwords.empty()) {
    ASSIGN_OR_RETURN(r.stopwords, StopwordSet::Load(paths.stopwords));
  }
  if (!paths.aspect_lexicon.empty()) {
    ASSIGN_OR_RETURN(r.aspects, TermLexicon::Load(paths.aspect_lexicon));
  }
  if (!paths.opinion_lexicon.empty()) {
    ASSIGN_OR_RETURN(r.opinions, TermLexicon::Load(paths.opinion_lexicon));
  }
  return r;
}

ojson PipelineResources::ToJson() const {
  ojson j;
  j["spelling_lexicon"] = spelling.Entries();
  j["stopwords"] = stopwords.Words();
  j["aspect_lexicon"] = aspects.Terms();
  j["opinion_lexicon"] = opinions.Terms();
  return j;
}

absl::StatusOr<PipelineResources> PipelineResources::FromJson(const json& j) {
  try {
    PipelineResources r;
    ASSIGN_OR_RETURN(
        r.spelling,
        SpellingLexicon::FromEntries(
            j.at("spelling_lexicon")
                .get<std::vector<std::pair<std::string, std::string>>>()));
    r.stopwords =
        StopwordSet(j.at("stopwords").get<std::vector<std::string>>());
    r.aspects =
        TermLexicon(j.at("aspect_lexicon").get<std::vector<std::string>>());
    r.opinions =
        TermLexicon(j.at("opinion_lexicon").get<std::vector<std::string>>());
    return r;
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        fmt::format("malformed resources: {}", e.what()));
  }
}

absl::StatusOr<std::shared_ptr<const EmbeddingBackend>> MakeBackend(
    const PipelineConfig& config) {
  if (config.polarity.backend == BackendKind::kHashed) {
    ASSIGN_OR_RETURN(
        HashedEmbeddingBackend backend,
        HashedEmbeddingBackend::Create(config.polarity.dim, config.seed));
    return std::make_shared<const HashedEmbeddingBackend>(std::move(backend));
  }
  if (config.paths.embedding_store.empty()) {
    return absl::InvalidArgumentError(
        "polarity.backend is precomputed but paths.embedding_store is empty");
  }
  ASSIGN_OR_RETURN(EmbeddingStore store,
                   EmbeddingStore::Load(config.paths.embedding_store));
  if (store.dim() != config.polarity.dim) {
    return absl::InvalidArgumentError(fmt::format(
        "embedding store dimension {} does not match polarity.dim {}",
        store.dim(), config.polarity.dim));
  }
  return std::make_shared<const PrecomputedEmbeddingBackend>(std::move(store));
}

std::optional<TokenInterval> CoveringTokens(const TokenizedText& text,
                                            Span raw) {
  std::optional<TokenInterval> out;
  for (size_t i = 0; i < text.size(); ++i) {
    auto mapped =
        MapSpan(text.offset_map, {text.tokens[i].start, text.tokens[i].end});
    if (!mapped.ok()) continue;
    if (mapped->start < raw.end && raw.start < mapped->end) {
      if (!out) out = TokenInterval{i, i};
      out->last = i;
    }
  }
  return out;
}

absl::StatusOr<Span> RawSpan(const TokenizedText& text, TokenInterval span) {
  ASSIGN_OR_RETURN(
      CharRange raw,
      MapSpan(text.offset_map, text.TokenRange(span.first, span.last)));
  return Span{raw.start, raw.end};
}

ojson ExtractedTripletToJson(const ExtractedTriplet& t) {
  ojson j;
  j["aspect"] = {{"start", t.triplet.aspect.start},
                 {"end", t.triplet.aspect.end},
                 {"text", t.aspect_text}};
  j["opinion"] = {{"start", t.triplet.opinion.start},
                  {"end", t.triplet.opinion.end},
                  {"text", t.opinion_text}};
  j["polarity"] = PolarityName(t.triplet.polarity);
  j["confidence"] = t.confidence;
  j["aspect_score"] = t.aspect_score;
  j["opinion_score"] = t.opinion_score;
  j["edge_weight"] = t.edge_weight;
  ojson dist = ojson::object();
  for (int k = 0; k < kNumPolarities; ++k) {
    dist[std::string(PolarityName(kPolarityOrder[k]))] = t.distribution[k];
  }
  j["distribution"] = std::move(dist);
  return j;
}

ojson TrainingStats::ToJson() const {
  ojson j;
  j["reviews"] = reviews;
  j["gold_triplets"] = gold_triplets;
  j["unaligned_triplets"] = unaligned_triplets;
  j["unreachable_spans"] = unreachable_spans;
  j["spans_enumerated"] = spans_enumerated;
  j["aspect_candidates_kept"] = aspect_candidates_kept;
  j["opinion_candidates_kept"] = opinion_candidates_kept;
  j["pairs_matched"] = pairs_matched;
  j["polarity_examples"] = polarity_examples;
  j["polarity"] = polarity.ToJson();
  return j;
}

RoleCandidates ResolveRoles(std::vector<CandidateSpan> aspects,
                            std::vector<CandidateSpan> opinions) {
  std::vector<bool> drop_aspect(aspects.size(), false);
  std::vector<bool> drop_opinion(opinions.size(), false);
  for (size_t a = 0; a < aspects.size(); ++a) {
    for (size_t o = 0; o < opinions.size(); ++o) {
      if (!aspects[a].span.Overlaps(opinions[o].span)) continue;
      if (aspects[a].aspect_score >= opinions[o].opinion_score) {
        drop_opinion[o] = true;
      } else {
        drop_aspect[a] = true;
      }
    }
  }
  RoleCandidates out;
  for (size_t a = 0; a < aspects.size(); ++a) {
    if (!drop_aspect[a]) out.aspects.push_back(aspects[a]);
  }
  for (size_t o = 0; o < opinions.size(); ++o) {
    if (!drop_opinion[o]) out.opinions.push_back(opinions[o]);
  }
  return out;
}

absl::StatusOr<PipelineModel> PipelineModel::FromParts(
    PipelineConfig config, PipelineResources resources,
    std::shared_ptr<const EmbeddingBackend> backend,
    std::unique_ptr<SpanScorer> scorer,
    std::unique_ptr<PolarityModel> polarity) {
  RETURN_IF_ERROR(config.Validate());
  if (!backend || !scorer || !polarity) {
    return absl::InvalidArgumentError("pipeline parts must be non-null");
  }
  if (backend->dim() != config.polarity.dim) {
    return absl::InvalidArgumentError(
        fmt::format("embedding dimension {} does not match polarity.dim {}",
                    backend->dim(), config.polarity.dim));
  }
  if (polarity->input_dim() != PairFeatureDim(backend->dim())) {
    return absl::InvalidArgumentError(fmt::format(
        "polarity model expects {} features but the backend yields {}",
        polarity->input_dim(), PairFeatureDim(backend->dim())));
  }
  PipelineModel model;
  model.config_ = std::move(config);
  model.resources_ = std::move(resources);
  model.backend_ = std::move(backend);
  model.scorer_ = std::move(scorer);
  model.polarity_ = std::move(polarity);
  return model;
}

TokenizedText PipelineModel::Preprocess(const Review& review) const {
  return aste::Preprocess(review.raw_text, resources_.spelling,
                          resources_.stopwords);
}

absl::StatusOr<PipelineModel> PipelineModel::Train(
    const Corpus& corpus, const PipelineConfig& config,
    PipelineResources resources,
    std::shared_ptr<const EmbeddingBackend> backend, TrainingStats* stats) {
  RETURN_IF_ERROR(config.Validate());
  if (!backend) return absl::InvalidArgumentError("missing embedding backend");
  TrainingStats local;
  TrainingStats& st = stats ? *stats : local;
  st = TrainingStats();
  st.reviews = corpus.size();

  std::vector<PreparedReview> prepared;
  prepared.reserve(corpus.size());
  for (const AnnotatedReview& r : corpus) {
    if (!r.gold) {
      return absl::FailedPreconditionError(fmt::format(
          "review '{}' has no gold triplets; adjudicate the corpus first",
          r.review.id));
    }
    PreparedReview p;
    p.source = &r;
    p.text = aste::Preprocess(r.review.raw_text, resources.spelling,
                              resources.stopwords);
    auto vectors = backend->Embed(r.review.id, p.text);
    if (!vectors.ok()) return WithReview(vectors.status(), r.review.id);
    p.vectors = *std::move(vectors);
    for (const Triplet& t : *r.gold) {
      ++st.gold_triplets;
      const auto aspect = CoveringTokens(p.text, t.aspect);
      const auto opinion = CoveringTokens(p.text, t.opinion);
      if (!aspect || !opinion) {
        ++st.unaligned_triplets;
        continue;
      }
      p.gold.push_back({*aspect, *opinion, t.polarity});
    }
    prepared.push_back(std::move(p));
  }

  // Stage 1: span scorer.
  std::vector<SpanExample> examples;
  for (const PreparedReview& p : prepared) {
    std::set<TokenInterval> aspects, opinions;
    for (const AlignedTriplet& t : p.gold) {
      aspects.insert(t.aspect);
      opinions.insert(t.opinion);
      for (TokenInterval s : {t.aspect, t.opinion}) {
        if (!Reachable(p.text, s, config.spanex.max_span_len)) {
          ++st.unreachable_spans;
        }
      }
    }
    for (TokenInterval span :
         CandidateIntervals(p.text, config.spanex.max_span_len)) {
      examples.push_back({&p.text, &p.vectors, span, aspects.count(span) > 0,
                          opinions.count(span) > 0});
    }
  }
  st.spans_enumerated = examples.size();
  std::unique_ptr<SpanScorer> scorer;
  if (config.spanex.scorer == ScorerKind::kLexicon) {
    scorer = std::make_unique<LexiconSpanScorer>(resources.aspects,
                                                 resources.opinions);
  } else {
    LogisticScorerConfig sc;
    sc.hash_bits = config.spanex.hash_bits;
    sc.seed = config.seed;
    sc.epochs = config.spanex.epochs;
    sc.learning_rate = config.spanex.learning_rate;
    sc.l2 = config.spanex.l2;
    sc.balance_classes = config.spanex.balance_classes;
    sc.use_embeddings = config.spanex.scorer == ScorerKind::kEncoder;
    auto trained = LogisticSpanScorer::Train(examples, resources.aspects,
                                             resources.opinions, sc);
    if (!trained.ok()) {
      return absl::Status(trained.status().code(),
                          fmt::format("span scorer: {}",
                                      std::string(trained.status().message())));
    }
    scorer = std::make_unique<LogisticSpanScorer>(*std::move(trained));
  }
  Log(LogLevel::kInfo, "train.spanex",
      {{"scorer", std::string(ScorerKindName(config.spanex.scorer))},
       {"reviews", std::to_string(st.reviews)},
       {"spans_enumerated", std::to_string(st.spans_enumerated)},
       {"unaligned_triplets", std::to_string(st.unaligned_triplets)},
       {"unreachable_spans", std::to_string(st.unreachable_spans)}});

  // Stage 2: polarity classifier on gold pairs.
  std::vector<Vector> features;
  std::vector<Polarity> labels;
  for (const PreparedReview& p : prepared) {
    for (const AlignedTriplet& t : p.gold) {
      auto f = PairFeatures(p.vectors, t.aspect, t.opinion, config.pairmatch,
                            nullptr);
      if (!f.ok()) return WithReview(f.status(), p.source->review.id);
      features.push_back(*std::move(f));
      labels.push_back(t.polarity);
    }
  }
  st.polarity_examples = features.size();
  auto polarity = TrainPolarity(features, labels, config.polarity.model);
  if (!polarity.ok()) {
    return absl::Status(polarity.status().code(),
                        fmt::format("polarity classifier: {}",
                                    std::string(polarity.status().message())));
  }
  st.polarity = polarity->report;
  Log(LogLevel::kInfo, "train.polarity",
      {{"model",
        std::string(PolarityModelKindName(config.polarity.model.model))},
       {"examples", std::to_string(st.polarity_examples)},
       {"training_accuracy",
        fmt::format("{:.4f}", st.polarity.training_accuracy)}});

  ASSIGN_OR_RETURN(PipelineModel model,
                   FromParts(config, std::move(resources), std::move(backend),
                             std::move(scorer), std::move(polarity->model)));

  // Stage 3: candidate and matching counts on the training reviews.
  for (const PreparedReview& p : prepared) {
    ASSIGN_OR_RETURN(auto triplets, model.Extract(p.source->review));
    st.pairs_matched += triplets.size();
    const ScoringInput input{&p.text, &p.vectors};
    ASSIGN_OR_RETURN(
        auto scored,
        ScoreSpans(input,
                   CandidateIntervals(p.text, config.spanex.max_span_len),
                   *model.scorer_));
    st.aspect_candidates_kept +=
        Prune(scored, SpanRole::kAspect, config.spanex.threshold,
              config.spanex.top_k)
            .size();
    st.opinion_candidates_kept +=
        Prune(scored, SpanRole::kOpinion, config.spanex.threshold,
              config.spanex.top_k)
            .size();
  }
  Log(LogLevel::kInfo, "train.pairmatch",
      {{"aspect_candidates_kept", std::to_string(st.aspect_candidates_kept)},
       {"opinion_candidates_kept", std::to_string(st.opinion_candidates_kept)},
       {"pairs_matched", std::to_string(st.pairs_matched)}});
  return model;
}

absl::StatusOr<std::vector<ExtractedTriplet>> PipelineModel::Extract(
    const Review& review) const {
  const TokenizedText text = Preprocess(review);
  if (text.size() == 0) return std::vector<ExtractedTriplet>();
  auto vectors = backend_->Embed(review.id, text);
  if (!vectors.ok()) return WithReview(vectors.status(), review.id);
  const ScoringInput input{&text, &*vectors};
  auto scored = ScoreSpans(
      input, CandidateIntervals(text, config_.spanex.max_span_len), *scorer_);
  if (!scored.ok()) return WithReview(scored.status(), review.id);
  RoleCandidates roles =
      ResolveRoles(Prune(*scored, SpanRole::kAspect, config_.spanex.threshold,
                         config_.spanex.top_k),
                   Prune(*scored, SpanRole::kOpinion, config_.spanex.threshold,
                         config_.spanex.top_k));

  std::vector<Vector> aspect_vectors, opinion_vectors;
  for (const CandidateSpan& c : roles.aspects) {
    aspect_vectors.push_back(MeanPool(*vectors, c.span.first, c.span.last));
  }
  for (const CandidateSpan& c : roles.opinions) {
    opinion_vectors.push_back(MeanPool(*vectors, c.span.first, c.span.last));
  }
  auto graph =
      BuildPairGraph(std::move(roles.aspects), std::move(roles.opinions),
                     aspect_vectors, opinion_vectors, config_.pairmatch);
  if (!graph.ok()) return WithReview(graph.status(), review.id);

  const std::u32string raw = DecodeUtf8Lossy(review.raw_text);
  std::vector<ExtractedTriplet> out;
  for (const auto& [a, o] : MatchPairs(*graph, config_.pairmatch)) {
    const CandidateSpan& aspect = graph->aspects[a];
    const CandidateSpan& opinion = graph->opinions[o];
    const double weight = graph->weights[a][o];
    ASSIGN_OR_RETURN(Vector features, FeaturizePair(*vectors, aspect.span,
                                                    opinion.span, weight));
    ASSIGN_OR_RETURN(PolarityPrediction prediction,
                     polarity_->Predict(features));
    ExtractedTriplet t;
    ASSIGN_OR_RETURN(t.triplet.aspect, RawSpan(text, aspect.span));
    ASSIGN_OR_RETURN(t.triplet.opinion, RawSpan(text, opinion.span));
    t.triplet.polarity = prediction.label;
    t.aspect_text = EncodeUtf8(std::u32string_view(raw).substr(
        t.triplet.aspect.start, t.triplet.aspect.end - t.triplet.aspect.start));
    t.opinion_text = EncodeUtf8(std::u32string_view(raw).substr(
        t.triplet.opinion.start,
        t.triplet.opinion.end - t.triplet.opinion.start));
    t.aspect_score = aspect.aspect_score;
    t.opinion_score = opinion.opinion_score;
    t.edge_weight = weight;
    t.distribution = prediction.distribution;
    t.confidence = std::min(t.aspect_score, t.opinion_score) *
                   *std::max_element(prediction.distribution.begin(),
                                     prediction.distribution.end());
    out.push_back(std::move(t));
  }
  std::sort(out.begin(), out.end(),
            [](const ExtractedTriplet& x, const ExtractedTriplet& y) {
              return x.triplet < y.triplet;
            });
  return out;
}

absl::StatusOr<std::vector<std::vector<Triplet>>> PipelineModel::Predict(
    const Corpus& corpus) const {
  std::vector<std::vector<Triplet>> out;
  out.reserve(corpus.size());
  for (const AnnotatedReview& r : corpus) {
    ASSIGN_OR_RETURN(auto extracted, Extract(r.review));
    std::vector<Triplet> triplets;
    for (const ExtractedTriplet& t : extracted) triplets.push_back(t.triplet);
    out.push_back(std::move(triplets));
  }
  return out;
}

absl::StatusOr<MetricsReport> EvaluateModel(const PipelineModel& model,
                                            const Corpus& corpus,
                                            MatchCriterion criterion) {
  std::vector<GoldAndPrediction> pairs;
  pairs.reserve(corpus.size());
  for (const AnnotatedReview& r : corpus) {
    if (!r.gold) {
      return absl::FailedPreconditionError(fmt::format(
          "review '{}' has no gold triplets; adjudicate the corpus first",
          r.review.id));
    }
  }
  ASSIGN_OR_RETURN(auto predictions, model.Predict(corpus));
  for (size_t i = 0; i < corpus.size(); ++i) {
    pairs.push_back({*corpus[i].gold, std::move(predictions[i])});
  }
  MetricsReport report;
  report.rows = TallyCorpus(pairs, criterion).Rows();
  report.seed = model.config().seed;
  report.config_digest = ConfigDigest(model.config());
  report.criterion = criterion;
  return report;
}

absl::StatusOr<MetricsReport> CrossValidatePipeline(
    const Corpus& corpus, const PipelineConfig& config,
    const PipelineResources& resources,
    std::shared_ptr<const EmbeddingBackend> backend) {
  RETURN_IF_ERROR(config.Validate());
  FoldRunner runner =
      [&](const Corpus& train, const Corpus& test,
          int fold) -> absl::StatusOr<std::vector<std::vector<Triplet>>> {
    ASSIGN_OR_RETURN(PipelineModel model,
                     PipelineModel::Train(train, config, resources, backend));
    Log(LogLevel::kInfo, "crossval",
        {{"fold", std::to_string(fold)},
         {"train", std::to_string(train.size())},
         {"test", std::to_string(test.size())}});
    return model.Predict(test);
  };
  ASSIGN_OR_RETURN(MetricsReport report,
                   CrossValidate(corpus, config.eval.k, config.seed, runner,
                                 config.eval.match));
  report.config_digest = ConfigDigest(config);
  return report;
}

}  // namespace aste

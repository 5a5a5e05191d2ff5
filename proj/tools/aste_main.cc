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

// Command-line front end: ingest, stats, validate, train, extract, eval,
// crossval and config show.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "aste/bundle.h"
#include "aste/config.h"
#include "aste/corpus.h"
#include "aste/evalkit.h"
#include "aste/file_util.h"
#include "aste/ingest.h"
#include "aste/logging.h"
#include "aste/pipeline.h"
#include "aste/status_macros.h"
#include "fmt/format.h"

namespace aste {
namespace {

using ojson = nlohmann::ordered_json;

struct GlobalOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<uint64_t> seed;
  std::string out;
};

int ExitCode(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return 0;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kOutOfRange:
      return 1;
    default:
      return 2;
  }
}

absl::StatusOr<PipelineConfig> ResolveConfig(const GlobalOptions& g) {
  std::vector<std::string> overrides = g.overrides;
  if (g.seed) overrides.push_back(fmt::format("seed={}", *g.seed));
  return LoadConfig(g.config_path, overrides);
}

std::string OutDir(const GlobalOptions& g, const std::string& fallback) {
  return g.out.empty() ? fallback : g.out;
}

absl::Status EnsureDir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::InternalError(
        fmt::format("cannot create directory '{}': {}", dir, ec.message()));
  }
  return absl::OkStatus();
}

std::string PathIn(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

absl::StatusOr<std::string> CorpusPath(const std::string& positional,
                                       const PipelineConfig& config) {
  if (!positional.empty()) return positional;
  if (!config.paths.corpus.empty()) return config.paths.corpus;
  return absl::InvalidArgumentError(
      "no corpus given: pass a corpus file or set paths.corpus");
}

absl::Status RequireAdjudicated(const Corpus& corpus) {
  std::vector<std::string> missing;
  for (const AnnotatedReview& r : corpus) {
    if (!r.gold) missing.push_back(r.review.id);
  }
  if (missing.empty()) return absl::OkStatus();
  return absl::FailedPreconditionError(
      fmt::format("{} review(s) are not adjudicated: {}", missing.size(),
                  fmt::join(missing, ", ")));
}

absl::Status WriteReport(const MetricsReport& report, const std::string& dir) {
  RETURN_IF_ERROR(EnsureDir(dir));
  RETURN_IF_ERROR(WriteFile(PathIn(dir, "report.json"),
                            ReportToJson(report).dump(2) + "\n"));
  const std::string table = RenderReportTable(report);
  RETURN_IF_ERROR(WriteFile(PathIn(dir, "report.txt"), table));
  std::cout << table;
  return absl::OkStatus();
}

// ingest ----------------------------------------------------------------------

absl::Status RunIngest(const GlobalOptions& g,
                       const std::vector<std::string>& inputs) {
  ASSIGN_OR_RETURN(PipelineConfig config, ResolveConfig(g));
  std::vector<Review> reviews;
  IngestReport report;
  for (const std::string& input : inputs) {
    const size_t colon = input.find(':');
    if (colon == std::string::npos) {
      return absl::InvalidArgumentError(
          fmt::format("--input '{}' must have the form PLATFORM:PATH", input));
    }
    ASSIGN_OR_RETURN(Platform platform, ParsePlatform(input.substr(0, colon)));
    const std::string path = input.substr(colon + 1);
    auto read = ReadPlatformExportFile(path, platform, config.ingest.columns);
    if (!read.ok()) {
      return absl::Status(
          read.status().code(),
          fmt::format("{}: {}", path, std::string(read.status().message())));
    }
    report.input += read->report.input;
    for (const auto& [reason, n] : read->report.rejected) {
      report.rejected[reason] += n;
    }
    Log(LogLevel::kInfo, "ingest.read",
        {{"platform", std::string(PlatformName(platform))},
         {"path", path},
         {"rows", std::to_string(read->report.input)}});
    for (Review& r : read->reviews) reviews.push_back(std::move(r));
  }
  ASSIGN_OR_RETURN(FilterResult filtered,
                   FilterReviews(reviews, config.ingest.filter));
  report.accepted = filtered.report.accepted;
  report.duplicates_removed = filtered.report.duplicates_removed;
  for (const auto& [reason, n] : filtered.report.rejected) {
    report.rejected[reason] += n;
  }
  for (const auto& [id, reason] : filtered.rejections) {
    Log(LogLevel::kDebug, "ingest.reject", {{"id", id}, {"reason", reason}});
  }
  const std::string dir = OutDir(g, "aste_out");
  RETURN_IF_ERROR(EnsureDir(dir));
  RETURN_IF_ERROR(SaveCorpus(ToUnannotatedCorpus(filtered.kept),
                             PathIn(dir, "corpus.jsonl")));
  RETURN_IF_ERROR(
      WriteFile(PathIn(dir, "ingest_report.json"), report.ToJson()));
  std::cout << report.ToJson();
  Log(LogLevel::kInfo, "ingest",
      {{"input", std::to_string(report.input)},
       {"accepted", std::to_string(report.accepted)},
       {"out", dir}});
  return absl::OkStatus();
}

// stats / validate
// --------------------------------------------------------------

absl::StatusOr<Corpus> LoadRawCorpus(const std::string& path) {
  CorpusParseOptions options;
  options.require_annotations = false;
  return LoadCorpus(path, options);
}

absl::Status RunStats(const GlobalOptions& g, const std::string& corpus_arg,
                      const std::string& manifest_path) {
  ASSIGN_OR_RETURN(PipelineConfig config, ResolveConfig(g));
  ASSIGN_OR_RETURN(std::string path, CorpusPath(corpus_arg, config));
  ASSIGN_OR_RETURN(Corpus corpus, LoadRawCorpus(path));
  RETURN_IF_ERROR(RequireAdjudicated(corpus));
  ASSIGN_OR_RETURN(CorpusStats stats, ComputeCorpusStats(corpus));
  RETURN_IF_ERROR(stats.Validate());
  std::cout << RenderCorpusStats(stats);
  if (!g.out.empty()) {
    RETURN_IF_ERROR(EnsureDir(g.out));
    RETURN_IF_ERROR(WriteFile(PathIn(g.out, "stats.json"),
                              SerializeManifest(ManifestFromStats(stats))));
  }
  if (!manifest_path.empty()) {
    ASSIGN_OR_RETURN(CorpusManifest manifest, LoadManifest(manifest_path));
    RETURN_IF_ERROR(CheckManifest(stats, manifest));
    std::cout << fmt::format("manifest {} matches\n", manifest_path);
  }
  return absl::OkStatus();
}

absl::Status RunValidate(const GlobalOptions& g, const std::string& corpus_arg,
                         const std::string& manifest_path, bool adjudicate) {
  ASSIGN_OR_RETURN(PipelineConfig config, ResolveConfig(g));
  ASSIGN_OR_RETURN(std::string path, CorpusPath(corpus_arg, config));
  ASSIGN_OR_RETURN(Corpus corpus, LoadRawCorpus(path));
  size_t conflicts = 0;
  if (adjudicate) {
    conflicts = AdjudicateCorpus(corpus);
    const std::string dir = OutDir(g, "aste_out");
    RETURN_IF_ERROR(EnsureDir(dir));
    RETURN_IF_ERROR(SaveCorpus(corpus, PathIn(dir, "corpus.jsonl")));
  }
  size_t annotated = 0;
  size_t adjudicated = 0;
  for (const AnnotatedReview& r : corpus) {
    annotated += r.annotations.empty() ? 0 : 1;
    adjudicated += r.gold ? 1 : 0;
  }
  ojson summary;
  summary["corpus"] = path;
  summary["reviews"] = corpus.size();
  summary["annotated"] = annotated;
  summary["adjudicated"] = adjudicated;
  if (adjudicate) summary["conflicts"] = conflicts;
  summary["config_digest"] = ConfigDigest(config);
  if (!manifest_path.empty()) {
    RETURN_IF_ERROR(RequireAdjudicated(corpus));
    ASSIGN_OR_RETURN(CorpusStats stats, ComputeCorpusStats(corpus));
    ASSIGN_OR_RETURN(CorpusManifest manifest, LoadManifest(manifest_path));
    RETURN_IF_ERROR(CheckManifest(stats, manifest));
    summary["manifest"] = "match";
  }
  std::cout << summary.dump(2) << "\n";
  return absl::OkStatus();
}

// train / extract / eval / crossval
// ---------------------------------------------

absl::Status RunTrain(const GlobalOptions& g, const std::string& corpus_arg) {
  ASSIGN_OR_RETURN(PipelineConfig config, ResolveConfig(g));
  ASSIGN_OR_RETURN(std::string path, CorpusPath(corpus_arg, config));
  ASSIGN_OR_RETURN(Corpus corpus, LoadRawCorpus(path));
  RETURN_IF_ERROR(RequireAdjudicated(corpus));
  ASSIGN_OR_RETURN(PipelineResources resources,
                   PipelineResources::Load(config.paths));
  ASSIGN_OR_RETURN(auto backend, MakeBackend(config));
  TrainingStats stats;
  ASSIGN_OR_RETURN(PipelineModel model,
                   PipelineModel::Train(corpus, config, std::move(resources),
                                        std::move(backend), &stats));
  const std::string dir = OutDir(g, config.paths.model_bundle);
  RETURN_IF_ERROR(SaveBundle(model, dir, CorpusDigest(corpus), stats));
  Log(LogLevel::kInfo, "train",
      {{"bundle", dir},
       {"config_digest", ConfigDigest(config)},
       {"polarity_training_accuracy",
        fmt::format("{:.4f}", stats.polarity.training_accuracy)}});
  std::cout << fmt::format("bundle written to {}\nconfig digest {}\n", dir,
                           ConfigDigest(config));
  return absl::OkStatus();
}

struct BundleOptions {
  std::string bundle;
  bool allow_mismatch = false;
};

// Loads the bundle; a --config/--set given alongside must hash to the
// bundle's digest unless the mismatch is explicitly allowed.
absl::StatusOr<LoadedBundle> OpenBundle(const GlobalOptions& g,
                                        const BundleOptions& b) {
  std::optional<PipelineConfig> user;
  if (!g.config_path.empty() || !g.overrides.empty() || g.seed) {
    ASSIGN_OR_RETURN(user, ResolveConfig(g));
  }
  ASSIGN_OR_RETURN(
      LoadedBundle loaded,
      LoadBundle(b.bundle, user ? std::optional(user->paths) : std::nullopt));
  if (user) {
    absl::Status digest = CheckConfigDigest(loaded.manifest, *user);
    if (!digest.ok()) {
      if (!b.allow_mismatch) {
        return absl::FailedPreconditionError(
            fmt::format("{}; pass --allow-digest-mismatch to proceed",
                        std::string(digest.message())));
      }
      Log(LogLevel::kWarn, "bundle",
          {{"digest_mismatch", std::string(digest.message())}});
    }
  }
  return loaded;
}

absl::Status RunExtract(const GlobalOptions& g, const BundleOptions& b,
                        const std::string& corpus_arg,
                        const std::optional<std::string>& text) {
  ASSIGN_OR_RETURN(LoadedBundle loaded, OpenBundle(g, b));
  Corpus corpus;
  if (text) {
    AnnotatedReview r;
    r.review.id = "text";
    r.review.raw_text = *text;
    corpus.push_back(std::move(r));
  } else {
    ASSIGN_OR_RETURN(std::string path,
                     CorpusPath(corpus_arg, loaded.model.config()));
    ASSIGN_OR_RETURN(corpus, LoadRawCorpus(path));
  }
  std::string out;
  for (const AnnotatedReview& r : corpus) {
    ASSIGN_OR_RETURN(auto triplets, loaded.model.Extract(r.review));
    ojson line;
    line["id"] = r.review.id;
    line["config_digest"] = loaded.manifest.config_digest;
    line["triplets"] = ojson::array();
    for (const ExtractedTriplet& t : triplets) {
      line["triplets"].push_back(ExtractedTripletToJson(t));
    }
    out += line.dump() + "\n";
  }
  if (g.out.empty()) {
    std::cout << out;
    return absl::OkStatus();
  }
  RETURN_IF_ERROR(EnsureDir(g.out));
  return WriteFile(PathIn(g.out, "triplets.jsonl"), out);
}

absl::Status RunEval(const GlobalOptions& g, const BundleOptions& b,
                     const std::string& corpus_arg) {
  ASSIGN_OR_RETURN(LoadedBundle loaded, OpenBundle(g, b));
  const PipelineConfig& config = loaded.model.config();
  ASSIGN_OR_RETURN(std::string path, CorpusPath(corpus_arg, config));
  ASSIGN_OR_RETURN(Corpus corpus, LoadRawCorpus(path));
  RETURN_IF_ERROR(RequireAdjudicated(corpus));
  if (CorpusDigest(corpus) == loaded.manifest.corpus_digest) {
    Log(LogLevel::kWarn, "eval",
        {{"note", "evaluation corpus is the training corpus"}});
  }
  ASSIGN_OR_RETURN(MetricsReport report,
                   EvaluateModel(loaded.model, corpus, config.eval.match));
  return WriteReport(report, OutDir(g, "aste_out"));
}

absl::Status RunCrossval(const GlobalOptions& g,
                         const std::string& corpus_arg) {
  ASSIGN_OR_RETURN(PipelineConfig config, ResolveConfig(g));
  ASSIGN_OR_RETURN(std::string path, CorpusPath(corpus_arg, config));
  ASSIGN_OR_RETURN(Corpus corpus, LoadRawCorpus(path));
  RETURN_IF_ERROR(RequireAdjudicated(corpus));
  ASSIGN_OR_RETURN(PipelineResources resources,
                   PipelineResources::Load(config.paths));
  ASSIGN_OR_RETURN(auto backend, MakeBackend(config));
  ASSIGN_OR_RETURN(MetricsReport report,
                   CrossValidatePipeline(corpus, config, resources, backend));
  return WriteReport(report, OutDir(g, "aste_out"));
}

absl::Status RunConfigShow(const GlobalOptions& g) {
  ASSIGN_OR_RETURN(PipelineConfig config, ResolveConfig(g));
  ojson j = ConfigToJson(config);
  std::cout << j.dump(2) << "\n";
  std::cerr << fmt::format("config digest {}\n", ConfigDigest(config));
  return absl::OkStatus();
}

int Main(int argc, char** argv) {
  CLI::App app{"Aspect sentiment triplet extraction toolkit"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config_path, "Config file (JSON)");
  app.add_option("--set", g.overrides, "Override a config key: key=value")
      ->take_all()
      ->allow_extra_args(false);
  app.add_option("--seed", g.seed, "Random seed (overrides config seed)");
  app.add_option("--out", g.out, "Output directory");

  std::vector<std::string> inputs;
  std::string corpus_arg;
  std::string manifest;
  bool adjudicate = false;
  BundleOptions bundle;
  std::optional<std::string> text;
  std::function<absl::Status()> action;

  auto* ingest =
      app.add_subcommand("ingest", "Read platform exports into a corpus");
  ingest->add_option("--input", inputs, "PLATFORM:PATH export file")
      ->required();
  ingest->callback([&] { action = [&] { return RunIngest(g, inputs); }; });

  auto* stats = app.add_subcommand("stats", "Corpus statistics tables");
  stats->add_option("corpus", corpus_arg, "Corpus file");
  stats->add_option("--manifest", manifest, "Manifest to check against");
  stats->callback(
      [&] { action = [&] { return RunStats(g, corpus_arg, manifest); }; });

  auto* validate =
      app.add_subcommand("validate", "Validate a corpus and the config");
  validate->add_option("corpus", corpus_arg, "Corpus file");
  validate->add_option("--manifest", manifest, "Manifest to check against");
  validate->add_flag("--adjudicate", adjudicate,
                     "Majority-vote gold triplets and write the corpus");
  validate->callback([&] {
    action = [&] { return RunValidate(g, corpus_arg, manifest, adjudicate); };
  });

  auto* train = app.add_subcommand("train", "Train a model bundle");
  train->add_option("corpus", corpus_arg, "Adjudicated corpus file");
  train->callback([&] { action = [&] { return RunTrain(g, corpus_arg); }; });

  auto add_bundle_options = [&](CLI::App* cmd) {
    cmd->add_option("--bundle", bundle.bundle, "Model bundle directory")
        ->required();
    cmd->add_flag("--allow-digest-mismatch", bundle.allow_mismatch,
                  "Use the bundle even if --config hashes differently");
  };
  auto* extract = app.add_subcommand("extract", "Extract triplets");
  add_bundle_options(extract);
  extract->add_option("corpus", corpus_arg, "Corpus file");
  extract->add_option("--text", text, "Raw review text");
  extract->callback([&] {
    action = [&] { return RunExtract(g, bundle, corpus_arg, text); };
  });

  auto* eval = app.add_subcommand("eval", "Evaluate a bundle on a corpus");
  add_bundle_options(eval);
  eval->add_option("corpus", corpus_arg, "Adjudicated corpus file");
  eval->callback(
      [&] { action = [&] { return RunEval(g, bundle, corpus_arg); }; });

  auto* crossval = app.add_subcommand("crossval", "k-fold cross-validation");
  crossval->add_option("corpus", corpus_arg, "Adjudicated corpus file");
  crossval->callback(
      [&] { action = [&] { return RunCrossval(g, corpus_arg); }; });

  auto* config = app.add_subcommand("config", "Configuration commands");
  config->require_subcommand(1);
  auto* show =
      config->add_subcommand("show", "Print the effective configuration");
  show->callback([&] { action = [&] { return RunConfigShow(g); }; });

  for (CLI::App* cmd : {ingest, stats, validate, train, extract, eval, crossval,
                        config, show}) {
    cmd->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  const absl::Status status = action();
  if (!status.ok()) {
    std::cerr << "error: " << status.message() << "\n";
  }
  return ExitCode(status);
}

}  // namespace
}  // namespace aste

int main(int argc, char** argv) { return aste::Main(argc, argv); }

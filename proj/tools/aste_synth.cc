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

// Writes a synthetic annotated corpus plus matching seed lexicons and a
// config that points at them.

#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "aste/config.h"
#include "aste/corpus.h"
#include "aste/file_util.h"
#include "aste/status_macros.h"
#include "aste/synthetic.h"
#include "fmt/format.h"
#include "fmt/ranges.h"

namespace aste {
namespace {

absl::Status Write(const std::string& dir, const SyntheticOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::InternalError(
        fmt::format("cannot create directory '{}': {}", dir, ec.message()));
  }
  auto path = [&](const char* name) {
    return (std::filesystem::path(dir) / name).string();
  };
  const SyntheticLexicon& lexicon = DefaultSyntheticLexicon();
  const Corpus corpus = GenerateSyntheticCorpus(options, lexicon);
  RETURN_IF_ERROR(SaveCorpus(corpus, path("corpus.jsonl")));
  RETURN_IF_ERROR(
      WriteFile(path("aspects.txt"),
                fmt::format("{}\n", fmt::join(lexicon.AspectTerms(), "\n"))));
  RETURN_IF_ERROR(
      WriteFile(path("opinions.txt"),
                fmt::format("{}\n", fmt::join(lexicon.OpinionTerms(), "\n"))));
  PipelineConfig config;
  config.seed = options.seed;
  config.paths.corpus = path("corpus.jsonl");
  config.paths.aspect_lexicon = path("aspects.txt");
  config.paths.opinion_lexicon = path("opinions.txt");
  config.paths.model_bundle = path("bundle");
  RETURN_IF_ERROR(
      WriteFile(path("config.json"), ConfigToJson(config).dump(2) + "\n"));
  std::cout << fmt::format("wrote {} reviews to {}\n", corpus.size(), dir);
  return absl::OkStatus();
}

}  // namespace
}  // namespace aste

int main(int argc, char** argv) {
  CLI::App app{"Synthetic corpus generator"};
  aste::SyntheticOptions options;
  std::string out = "synthetic";
  app.add_option("--reviews", options.reviews, "Number of reviews")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", options.seed, "Random seed");
  app.add_option("--two-clause", options.two_clause_fraction,
                 "Share of two-clause reviews")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--intensifier", options.intensifier_fraction,
                 "Share of intensified opinions")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--noise", options.noise_fraction,
                 "Share of reviews with emoji or extra whitespace")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--out", out, "Output directory");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  const absl::Status status = aste::Write(out, options);
  if (!status.ok()) {
    std::cerr << "error: " << status.message() << "\n";
    return 2;
  }
  return 0;
}

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

// Runs the command-line tools as subprocesses.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "aste/corpus.h"
#include "aste/file_util.h"
#include "fmt/format.h"
#include "fmt/ranges.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "test_util.h"

namespace aste {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr
};

RunResult RunBinary(const std::string& binary, const std::string& args) {
  const std::string command =
      fmt::format("ASTE_LOG=warn {} {} 2>&1", binary, args);
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return result;
  char buffer[4096];
  size_t n;
  while ((n = fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
    result.output.append(buffer, n);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

RunResult Aste(const std::string& args) {
  return RunBinary(ASTE_CLI_PATH, args);
}

std::string Slurp(const fs::path& path) {
  auto content = ReadFile(path.string());
  EXPECT_TRUE(content.ok()) << content.status();
  return content.ok() ? *content : "";
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           ::testing::UnitTest::GetInstance()->current_test_info()->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  std::string P(const std::string& name) const {
    return (dir_ / name).string();
  }

  void Synthesize(int reviews, int seed = 42) {
    const RunResult r = RunBinary(
        ASTE_SYNTH_PATH, fmt::format("--reviews {} --seed {} --out {}", reviews,
                                     seed, P("syn")));
    ASSERT_EQ(r.exit_code, 0) << r.output;
  }

  fs::path dir_;
};

TEST_F(CliTest, IngestThreeRowExport) {
  ASSERT_OK(WriteFile(P("daraz.csv"),
                      "text,rating\n"
                      "ব্যাটারি খুব ভালো,5\n"
                      "দাম অনেক বেশি,2\n"
                      "ভালো\n"));
  const RunResult r = Aste(fmt::format("ingest --input daraz:{} --out {}",
                                       P("daraz.csv"), P("out")));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  auto corpus =
      LoadCorpus(P("out/corpus.jsonl"), {.require_annotations = false});
  ASSERT_OK(corpus.status());
  EXPECT_LE(corpus->size(), 3u);
  auto report = nlohmann::json::parse(Slurp(P("out/ingest_report.json")));
  size_t rejected = 0;
  for (const auto& [reason, n] : report["rejected"].items()) {
    rejected += n.get<size_t>();
  }
  EXPECT_EQ(report["input"].get<size_t>(), 3u);
  EXPECT_EQ(report["accepted"].get<size_t>() + rejected +
                report["duplicates_removed"].get<size_t>(),
            3u);
  EXPECT_EQ(report["accepted"].get<size_t>(), corpus->size());
}

TEST_F(CliTest, IngestUnreadablePathNamesPath) {
  const RunResult r = Aste(fmt::format("ingest --input facebook:{} --out {}",
                                       P("missing.csv"), P("out")));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find(P("missing.csv")), std::string::npos) << r.output;
  const RunResult bad = Aste("ingest --input nowhere.csv");
  EXPECT_EQ(bad.exit_code, 1);
  EXPECT_NE(bad.output.find("PLATFORM:PATH"), std::string::npos);
}

TEST_F(CliTest, StatsMatchesFixtureManifest) {
  const RunResult r = Aste(
      "stats data/fixture_corpus.jsonl --manifest data/fixture_manifest.json "
      "--out " +
      P("stats"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("Battery Life"), std::string::npos);
  auto written = ParseManifest(Slurp(P("stats/stats.json")));
  ASSERT_OK(written.status());
  EXPECT_EQ(*written->total_reviews, 10u);
  const RunResult wrong = Aste(
      "stats data/fixture_corpus.jsonl --manifest data/table1_manifest.json");
  EXPECT_EQ(wrong.exit_code, 1);
}

TEST_F(CliTest, StatsRefusesUnadjudicatedCorpusListingIds) {
  auto corpus = LoadCorpus("data/fixture_corpus.jsonl");
  ASSERT_OK(corpus.status());
  (*corpus)[2].gold.reset();
  (*corpus)[5].gold.reset();
  ASSERT_OK(SaveCorpus(*corpus, P("raw.jsonl")));
  const RunResult r = Aste("stats " + P("raw.jsonl"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find((*corpus)[2].review.id), std::string::npos);
  EXPECT_NE(r.output.find((*corpus)[5].review.id), std::string::npos);
  const RunResult fixed = Aste(fmt::format("validate {} --adjudicate --out {}",
                                           P("raw.jsonl"), P("adj")));
  ASSERT_EQ(fixed.exit_code, 0) << fixed.output;
  EXPECT_EQ(Aste("stats " + P("adj/corpus.jsonl")).exit_code, 0);
}

TEST_F(CliTest, TrainExtractEvalAreDeterministic) {
  Synthesize(150);
  const std::string config = "--config " + P("syn/config.json");
  for (const char* bundle : {"b1", "b2"}) {
    const RunResult r =
        Aste(fmt::format("{} train --out {}", config, P(bundle)));
    ASSERT_EQ(r.exit_code, 0) << r.output;
  }
  for (const char* file : {"manifest.json", "config.json", "span_scorer.json",
                           "polarity_model.json", "resources.json"}) {
    EXPECT_EQ(Slurp(dir_ / "b1" / file), Slurp(dir_ / "b2" / file)) << file;
  }
  Synthesize(60, 7);
  for (const char* bundle : {"b1", "b2"}) {
    const RunResult e = Aste(fmt::format("eval --bundle {} {} --out {}",
                                         P(bundle), P("syn/corpus.jsonl"),
                                         P(std::string("eval_") + bundle)));
    ASSERT_EQ(e.exit_code, 0) << e.output;
    const RunResult x = Aste(fmt::format("extract --bundle {} {} --out {}",
                                         P(bundle), P("syn/corpus.jsonl"),
                                         P(std::string("ext_") + bundle)));
    ASSERT_EQ(x.exit_code, 0) << x.output;
  }
  EXPECT_EQ(Slurp(P("eval_b1/report.json")), Slurp(P("eval_b2/report.json")));
  EXPECT_EQ(Slurp(P("eval_b1/report.txt")), Slurp(P("eval_b2/report.txt")));
  EXPECT_EQ(Slurp(P("ext_b1/triplets.jsonl")),
            Slurp(P("ext_b2/triplets.jsonl")));
  auto report = nlohmann::json::parse(Slurp(P("eval_b1/report.json")));
  auto manifest = nlohmann::json::parse(Slurp(P("b1/manifest.json")));
  EXPECT_EQ(report["config_digest"], manifest["config_digest"]);
}

TEST_F(CliTest, ExtractTextAndDigestMismatch) {
  Synthesize(120);
  const std::string config = "--config " + P("syn/config.json");
  ASSERT_EQ(Aste(fmt::format("{} train --out {}", config, P("b"))).exit_code,
            0);
  const RunResult text = Aste(fmt::format(
      "extract --bundle {} --text 'এই ফোনের ক্যামেরা খারাপ'", P("b")));
  ASSERT_EQ(text.exit_code, 0) << text.output;
  auto line = nlohmann::json::parse(text.output);
  ASSERT_EQ(line["triplets"].size(), 1u) << text.output;
  EXPECT_EQ(line["triplets"][0]["polarity"], "negative");
  EXPECT_EQ(line["triplets"][0]["aspect"]["text"], "ক্যামেরা");

  const RunResult empty =
      Aste(fmt::format("extract --bundle {} --text ''", P("b")));
  ASSERT_EQ(empty.exit_code, 0) << empty.output;
  EXPECT_TRUE(nlohmann::json::parse(empty.output)["triplets"].empty());

  const std::string mismatched =
      fmt::format("{} --set spanex.threshold=0.7 extract --bundle {} --text x",
                  config, P("b"));
  const RunResult refused = Aste(mismatched);
  EXPECT_EQ(refused.exit_code, 1);
  EXPECT_NE(refused.output.find("digest"), std::string::npos);
  EXPECT_EQ(Aste(mismatched + " --allow-digest-mismatch").exit_code, 0);
  EXPECT_EQ(Aste(fmt::format("{} extract --bundle {} --text x", config, P("b")))
                .exit_code,
            0);
  const RunResult eval_refused =
      Aste(fmt::format("{} --set eval.match=overlap eval --bundle {} {}",
                       config, P("b"), P("syn/corpus.jsonl")));
  EXPECT_EQ(eval_refused.exit_code, 1);
}

TEST_F(CliTest, TrainRefusesOnePolarityClass) {
  Synthesize(40);
  auto corpus = LoadCorpus(P("syn/corpus.jsonl"));
  ASSERT_OK(corpus.status());
  for (AnnotatedReview& r : *corpus) {
    for (AnnotationRecord& a : r.annotations) {
      for (Triplet& t : a.triplets) t.polarity = Polarity::kNegative;
    }
    for (Triplet& t : *r.gold) t.polarity = Polarity::kNegative;
  }
  ASSERT_OK(SaveCorpus(*corpus, P("one.jsonl")));
  const RunResult r =
      Aste(fmt::format("train {} --out {}", P("one.jsonl"), P("b")));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("polarity"), std::string::npos) << r.output;
  EXPECT_FALSE(fs::exists(P("b/manifest.json")));
}

TEST_F(CliTest, CrossvalWritesBothReportForms) {
  Synthesize(100);
  const RunResult r =
      Aste(fmt::format("--config {} --set eval.k=4 crossval --out {}",
                       P("syn/config.json"), P("cv")));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  auto report = nlohmann::json::parse(Slurp(P("cv/report.json")));
  EXPECT_EQ(report["fold_details"].size(), 4u);
  EXPECT_NE(Slurp(P("cv/report.txt")).find("Across folds"), std::string::npos);
}

TEST_F(CliTest, ConfigShowAndErrors) {
  const RunResult shown = Aste("config show --seed 7 --set spanex.top_k=3");
  ASSERT_EQ(shown.exit_code, 0) << shown.output;
  EXPECT_NE(shown.output.find("config digest"), std::string::npos);
  const RunResult again = Aste("--seed 7 --set spanex.top_k=3 config show");
  EXPECT_EQ(again.output, shown.output);
  const RunResult repeated =
      Aste("config show --set spanex.top_k=3 --set eval.k=7");
  ASSERT_EQ(repeated.exit_code, 0) << repeated.output;
  EXPECT_NE(repeated.output.find("\"top_k\": 3"), std::string::npos);
  EXPECT_NE(repeated.output.find("\"k\": 7"), std::string::npos);
  EXPECT_EQ(Aste("config show --set spanex.nope=1").exit_code, 1);
  EXPECT_EQ(Aste("config show --set spanex.threshold=2").exit_code, 1);
  EXPECT_EQ(Aste("config show --config " + P("missing.json")).exit_code, 1);
  EXPECT_EQ(Aste("").exit_code, 1);
  EXPECT_EQ(Aste("train --unknown-flag").exit_code, 1);
}

TEST_F(CliTest, RuntimeFailureExitsTwo) {
  const RunResult r = Aste(
      "validate data/fixture_corpus.jsonl --adjudicate --out "
      "/proc/aste_not_writable");
  EXPECT_EQ(r.exit_code, 2) << r.output;
}

}  // namespace
}  // namespace aste

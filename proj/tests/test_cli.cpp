// Copyright 2026 The HSC Text Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <filesystem>
#include <fstream>

#include "hsc/hsc.hpp"

namespace hsc {
namespace {

namespace fs = std::filesystem;

int run(const std::string& args, const fs::path& log = "/dev/null") {
  const std::string cmd = std::string(HSCR_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class Cli : public ::testing::Test {
 protected:
  static inline fs::path dir;

  static void SetUpTestSuite() {
    dir = fs::temp_directory_path() / "hsc_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string c = (dir / "corpus").string();
    ASSERT_EQ(run("synth --out " + c + " --samples 2 --test-samples 1 --words 8 --test-words 4 --lexicon-size 6 --seed 5"), 0);
    ASSERT_EQ(run("learn-dict --corpus " + c + "/chars/train --out " + p("d.hscd") +
                  " --patch-side 5 --atoms 16 --iters 2 --per-image 10 --json " + p("d.json")),
              0);
    ASSERT_EQ(run("train --features hog --train " + c + "/chars_train.jsonl --test " + c + "/chars_test.jsonl --out " +
                  p("hog.hscm") + " --max-epochs 50"),
              0);
    ASSERT_EQ(run("train-geom --annotations " + c + "/words_train.jsonl --out " + p("geom.json")), 0);
    ASSERT_EQ(run("mce-train --planted 20 --epochs 2 --out " + p("params.json") + " --trace " + p("trace.csv")), 0);
  }
  static void TearDownTestSuite() { fs::remove_all(dir); }

  static std::string p(const std::string& name) { return (dir / name).string(); }
  static std::string corpus(const std::string& name) { return (dir / "corpus" / name).string(); }
  static std::string pipeline() {
    return " --model " + p("hog.hscm") + " --params " + p("params.json") + " --geom " + p("geom.json");
  }
};

TEST_F(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run("train --help"), 0);
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(run("train --out x.hscm"), 1);
  EXPECT_EQ(run("train --train /nonexistent.jsonl --out x.hscm"), 1);
  EXPECT_EQ(run("learn-dict --corpus /nonexistent --out x"), 1);
  EXPECT_EQ(run("recognize --image " + corpus("words/test/000000.pgm") + " --lexicon " +
                corpus("lexicons/test/000000.txt") + pipeline() + " --nms sideways"),
            1);
  // HSC features without a dictionary.
  EXPECT_EQ(run("train --features hsc --train " + corpus("chars_train.jsonl") + " --out " + p("x.hscm")), 1);
}

TEST_F(Cli, DataErrorsExitWithTwo) {
  {
    std::ofstream bad(p("bad.hscm"), std::ios::binary);
    bad << "garbage";
  }
  EXPECT_EQ(run("recognize --image " + corpus("words/test/000000.pgm") + " --lexicon " +
                corpus("lexicons/test/000000.txt") + " --model " + p("bad.hscm")),
            2);
  {
    std::ofstream bad(p("bad.jsonl"));
    bad << "{\"image\": 3}\n";
  }
  EXPECT_EQ(run("train-geom --annotations " + p("bad.jsonl") + " --out " + p("g2.json")), 2);
}

TEST_F(Cli, ArtifactsLoad) {
  const Dictionary d = load_dictionary(p("d.hscd"));
  EXPECT_EQ(d.k(), 16);
  EXPECT_EQ(d.patch_side(), 5);
  const auto dj = nlohmann::json::parse(io::read_file(p("d.json")));
  EXPECT_EQ(dj["atoms"][3][7].get<double>(), d.atoms()(7, 3));

  const CharClassifier m = load_model(p("hog.hscm"));
  EXPECT_EQ(feature_dim(m), kHogLength);
  const auto meta = nlohmann::json::parse(io::read_file(p("hog.hscm") + ".json"));
  EXPECT_EQ(meta["training_config"]["features"], "hog");

  const auto geom = geometric_from_json(nlohmann::json::parse(io::read_file(p("geom.json"))));
  const auto [params, z] = params_from_json(nlohmann::json::parse(io::read_file(p("params.json"))));
  EXPECT_NO_THROW(params.validate());
  EXPECT_NE(geom, GeometricModel{});
  EXPECT_EQ(io::read_file(p("trace.csv")).substr(0, 24), "epoch,mean_loss,accuracy");
}

TEST_F(Cli, RecognizeWritesReportAndCandidates) {
  ASSERT_EQ(run("recognize --image " + corpus("words/test/000000.pgm") + " --lexicon " +
                    corpus("lexicons/test/000000.txt") + pipeline() + " --dump-candidates " + p("cands.jsonl"),
                p("rec.out")),
            0);
  const auto report = nlohmann::json::parse(io::read_file(p("rec.out")));
  const auto lexicon = load_lexicon(corpus("lexicons/test/000000.txt"));
  EXPECT_NE(std::find(lexicon.begin(), lexicon.end(), report["top_word"].get<std::string>()), lexicon.end());
  std::ifstream is(p("cands.jsonl"));
  const auto cands = read_candidates(is);
  EXPECT_FALSE(cands.empty());
  EXPECT_EQ(nms(cands, 0.5, true).size(), cands.size());
}

TEST_F(Cli, EvalReportMatchesRecords) {
  ASSERT_EQ(run("eval --annotations " + corpus("words_test.jsonl") + pipeline() + " --out-dir " + p("eval")), 0);
  const auto report = nlohmann::json::parse(io::read_file(p("eval/report.json")));
  EXPECT_EQ(report["records"].size(), 4u);
  size_t correct = 0, total = 0;
  for (const auto& r : report["records"]) {
    if (r["skipped"].get<bool>()) continue;
    ++total;
    correct += r["correct"].get<bool>() ? 1 : 0;
  }
  EXPECT_EQ(report["total"].get<size_t>(), total);
  EXPECT_EQ(report["correct"].get<size_t>(), correct);
  const std::string csv = io::read_file(p("eval/records.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST_F(Cli, BenchAndConfigFile) {
  EXPECT_EQ(run("bench --annotations " + corpus("words_test.jsonl") + pipeline() + " --limit 1", p("bench.out")), 0);
  EXPECT_NE(io::read_file(p("bench.out")).find("detect"), std::string::npos);
  {
    std::ofstream cfg(p("run.toml"));
    cfg << "[train-geom]\nC = 50\nseed = 3\n";
  }
  EXPECT_EQ(run("--config " + p("run.toml") + " train-geom --annotations " + corpus("words_train.jsonl") + " --out " +
                p("g3.json")),
            0);
  EXPECT_EQ(run("train-geom --C 50 --seed 3 --annotations " + corpus("words_train.jsonl") + " --out " + p("g4.json")), 0);
  EXPECT_EQ(io::read_file(p("g3.json")), io::read_file(p("g4.json")));
}

TEST_F(Cli, RerunsAreByteIdentical) {
  ASSERT_EQ(run("train-geom --annotations " + corpus("words_train.jsonl") + " --out " + p("geom2.json")), 0);
  EXPECT_EQ(io::read_file(p("geom.json")), io::read_file(p("geom2.json")));
  ASSERT_EQ(run("--threads 2 train --features hog --train " + corpus("chars_train.jsonl") + " --out " + p("hog2.hscm") +
                " --max-epochs 50"),
            0);
  EXPECT_EQ(io::read_file(p("hog.hscm")), io::read_file(p("hog2.hscm")));
}

}  // namespace
}  // namespace hsc

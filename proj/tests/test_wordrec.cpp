// Copyright 2026 The HSC Text Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <sstream>

#include "test_util.hpp"

namespace hsc {
namespace {

const GeometricModel kTight = bench::PlantedConfig::default_planted_geometry();

CharCandidate cand(char ch, double x, double score, double side = 48, double y = 0) {
  return {{x, y, side, side}, label_of(ch), score, 0};
}

TEST(PairFeatures, HandComputed) {
  const auto f = pair_features({0, 0, 10, 20}, {15, 5, 20, 10});
  const PairFeatures want = {0.5, 0.5, 0.0, 0.5, 0.25, 0.25};
  for (int i = 0; i < kPairFeatures; ++i) EXPECT_DOUBLE_EQ(f[static_cast<size_t>(i)], want[static_cast<size_t>(i)]);
  const auto g = pair_features({0, 0, 10, 10}, {5, 0, 10, 10});
  EXPECT_DOUBLE_EQ(g[2], 50.0 / 150.0);
  EXPECT_DOUBLE_EQ(g[3], -0.5);
  EXPECT_THROW(pair_features({0, 0, 0, 10}, {0, 0, 1, 1}), std::invalid_argument);
  GeometricModel z;
  z.weights = {1, 2, 3, 4, 5, 6};
  z.bias = -1;
  EXPECT_DOUBLE_EQ(geometric_score(z, Box{0, 0, 10, 20}, Box{15, 5, 20, 10}), -1 + 0.5 + 1 + 0 + 2 + 1.25 + 1.5);
}

TEST(Pruning, Rules) {
  EXPECT_TRUE(feasible_successor(cand('a', 0, 0), cand('b', 24, 0)));
  EXPECT_FALSE(feasible_successor(cand('a', 0, 0), cand('b', 0, 0)));
  EXPECT_FALSE(feasible_successor(cand('a', 10, 0), cand('b', 5, 0)));
  EXPECT_FALSE(feasible_successor(cand('a', 0, 0), cand('b', 10, 0)));  // IoU 0.6
  EXPECT_TRUE(feasible_successor(cand('a', 0, 0), cand('b', 48 + 144, 0)));
  EXPECT_FALSE(feasible_successor(cand('a', 0, 0), cand('b', 48 + 145, 0)));
}

TEST(WordObjective, SumsTerms) {
  const std::vector<CharCandidate> chain = {cand('a', 0, 1.0), cand('b', 24, 2.0), cand('c', 48, 0.5)};
  // Each pair: gap -24 / 48 -> 1 + 2 * 0.5 = 2.
  EXPECT_DOUBLE_EQ(word_objective(chain, kTight, {0.5, -2.0}), 3.5 + 0.5 * 4 - 6);
  EXPECT_THROW(word_objective(std::vector<CharCandidate>{}, kTight, {}), std::invalid_argument);
}

struct Brute {
  std::optional<std::vector<CharCandidate>> chain;
  double objective = -std::numeric_limits<double>::infinity();
  double runner_up = -std::numeric_limits<double>::infinity();
};

Brute brute_force(const std::vector<std::vector<CharCandidate>>& lists, const GeometricModel& z, const PSParams& p,
                  const std::vector<CharCandidate>* excluded = nullptr) {
  Brute out;
  std::vector<size_t> idx(lists.size(), 0);
  for (const auto& l : lists)
    if (l.empty()) return out;
  while (true) {
    std::vector<CharCandidate> chain;
    bool ok = true;
    for (size_t i = 0; i < lists.size() && ok; ++i) {
      chain.push_back(lists[i][idx[i]]);
      if (i > 0 && !feasible_successor(chain[i - 1], chain[i])) ok = false;
    }
    if (ok && (!excluded || chain != *excluded)) {
      const double v = word_objective(chain, z, p);
      if (v > out.objective) {
        out.runner_up = out.objective;
        out.objective = v;
        out.chain = chain;
      } else if (v > out.runner_up) {
        out.runner_up = v;
      }
    }
    size_t k = 0;
    while (k < lists.size() && ++idx[k] == lists[k].size()) idx[k++] = 0;
    if (k == lists.size()) break;
  }
  return out;
}

std::vector<CharCandidate> random_candidates(Rng& rng, const std::string& word, int max_per_label) {
  std::vector<CharCandidate> out;
  std::set<char> letters(word.begin(), word.end());
  for (char ch : letters) {
    const int n = uniform_int(rng, 1, max_per_label);
    for (int i = 0; i < n; ++i) {
      const double side = uniform01(rng) < 0.7 ? 48 : 68;
      out.push_back(cand(ch, uniform_int(rng, 0, 40) * 8.0, uniform_real(rng, -1, 4), side,
                         uniform01(rng) < 0.8 ? 0 : 8));
    }
  }
  return out;
}

TEST(BestConfig, MatchesBruteForce) {
  Rng rng(2024);
  const std::string alphabet = "abcdeXYZ01";
  GeometricModel z;
  z.weights = {0.5, 0.5, -3, -1.5, -1, -1};
  z.bias = 0.8;
  int compared = 0;
  for (int t = 0; t < 100; ++t) {
    std::string word;
    const int len = uniform_int(rng, 1, 5);
    for (int i = 0; i < len; ++i) word.push_back(alphabet[uniform_index(rng, alphabet.size())]);
    const auto cands = random_candidates(rng, word, 8);
    const CandidateSets sets(cands);
    const PSParams p{uniform_real(rng, 0.1, 2), uniform_real(rng, -2, -0.1)};
    std::vector<std::vector<CharCandidate>> lists;
    for (char ch : word) lists.push_back(sets.of(label_of(ch)));
    const Brute want = brute_force(lists, z, p);
    const MatchResult got = best_config(word, sets, z, p);
    if (!want.chain) {
      EXPECT_EQ(got.status, MatchStatus::Infeasible);
      continue;
    }
    ASSERT_EQ(got.status, MatchStatus::Found);
    EXPECT_NEAR(got.config->objective, want.objective, 1e-9);
    if (want.objective - want.runner_up > 1e-9) {
      EXPECT_EQ(got.config->chosen, *want.chain);
    }
    ++compared;
  }
  EXPECT_GT(compared, 60);
}

TEST(BestConfig, ExactTiesPickLexicographicallySmallestChain) {
  // Two identical-score copies of "b" at different x; both chains tie.
  const std::vector<CharCandidate> c = {cand('a', 0, 1), cand('b', 48, 1), cand('b', 96, 1)};
  GeometricModel flat;  // pair score 0 everywhere
  const auto r = best_config("ab", CandidateSets(c), flat, {1, -1});
  ASSERT_EQ(r.status, MatchStatus::Found);
  EXPECT_EQ(r.config->chosen[1].box.x, 48);
}

TEST(BestConfig, StatusCodes) {
  const CandidateSets sets({cand('a', 0, 1), cand('b', 0, 1)});
  EXPECT_EQ(best_config("ac", sets, kTight, {}).status, MatchStatus::MissingLabel);
  EXPECT_EQ(best_config("a-b", sets, kTight, {}).status, MatchStatus::MissingLabel);
  EXPECT_EQ(best_config("ab", sets, kTight, {}).status, MatchStatus::Infeasible);
  EXPECT_EQ(best_config("a", sets, kTight, {}).status, MatchStatus::Found);
}

TEST(BestConfigExcluding, MatchesBruteForceSecondBest) {
  Rng rng(99);
  int compared = 0;
  for (int t = 0; t < 60; ++t) {
    const std::string word = t % 2 ? "abca" : "xyz";
    const auto cands = random_candidates(rng, word, 6);
    const CandidateSets sets(cands);
    const PSParams p{1.0, -1.0};
    const MatchResult top = best_config(word, sets, kTight, p);
    if (!top.config) continue;
    std::vector<std::vector<CharCandidate>> lists;
    for (char ch : word) lists.push_back(sets.of(label_of(ch)));
    const Brute want = brute_force(lists, kTight, p, &top.config->chosen);
    const MatchResult got = best_config_excluding(word, sets, kTight, p, top.config->chosen);
    if (!want.chain) {
      EXPECT_FALSE(got.config.has_value());
      continue;
    }
    ASSERT_TRUE(got.config.has_value());
    EXPECT_NE(got.config->chosen, top.config->chosen);
    EXPECT_NEAR(got.config->objective, want.objective, 1e-9);
    ++compared;
  }
  EXPECT_GT(compared, 30);
}

TEST(SpotWord, MadeExample) {
  // M A D E at a 30 px pitch; an N at the D position scores lower.
  const std::vector<CharCandidate> c = {cand('M', 0, 3.0),  cand('A', 30, 2.5), cand('D', 60, 2.0),
                                        cand('E', 90, 2.8), cand('N', 60, 1.2)};
  const std::vector<std::string> lexicon = {"MEAD", "MAN", "MADE", "made", "MADE"};
  const auto ranked = spot_word(c, lexicon, kTight, {1.0, -1.0});
  ASSERT_EQ(ranked.size(), 4u);
  EXPECT_EQ(ranked[0].word, "MADE");
  // Pair score 1 - 2 * (-18 / 48) = 1.75.
  EXPECT_NEAR(ranked[0].objective, 10.3 + 3 * 1.75 - 4, 1e-12);
  EXPECT_EQ(ranked[1].word, "MAN");
  EXPECT_NEAR(ranked[1].objective, 6.7 + 2 * 1.75 - 3, 1e-12);
  // Unmatched words sink, ordered by word.
  EXPECT_EQ(ranked[2].word, "MEAD");
  EXPECT_EQ(ranked[2].status, MatchStatus::Infeasible);
  EXPECT_EQ(ranked[3].word, "made");
  EXPECT_EQ(ranked[3].status, MatchStatus::MissingLabel);
  EXPECT_THROW(spot_word(c, {}, kTight, {}), std::invalid_argument);

  const auto rep = make_report("img.png", ranked);
  EXPECT_NEAR(rep.margin, ranked[0].objective - ranked[1].objective, 1e-12);
  const auto j = report_to_json(make_report("x", {ranked[2], ranked[3]}));
  EXPECT_TRUE(j["objective"].is_null());
}

TEST(SpotWord, ThreadIndependent) {
  Rng rng(5);
  const auto c = random_candidates(rng, "abcdefgh", 6);
  const std::vector<std::string> lex = {"bad", "cab", "face", "bead", "fade", "dead", "hg"};
  const auto a = spot_word(c, lex, kTight, {1, -1}, 1);
  const auto b = spot_word(c, lex, kTight, {1, -1}, 4);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].word, b[i].word);
    EXPECT_EQ(a[i].objective, b[i].objective);
  }
}

TEST(Geometric, TrainsOnWordLayouts) {
  Rng rng(3);
  std::vector<bench::AnnotatedWord> words;
  for (int w = 0; w < 60; ++w) {
    bench::AnnotatedWord aw;
    double x = 18;
    const int n = uniform_int(rng, 3, 7);
    for (int i = 0; i < n; ++i) {
      const double width = uniform_real(rng, 12, 26);
      aw.boxes.push_back({x, 8, width, 30});
      x += std::max(width + 3, 20.0);
    }
    words.push_back(aw);
  }
  const auto pairs = bench::geometric_pairs(words, 1);
  EXPECT_EQ(std::count_if(pairs.begin(), pairs.end(), [](const PairExample& p) { return p.compatible; }) * 4,
            static_cast<long>(pairs.size()));
  SvmConfig cfg;
  cfg.C = 100;
  const GeometricModel z = train_geometric(pairs, cfg);
  EXPECT_GE(pair_accuracy(z, pairs), 0.95);
  EXPECT_EQ(bench::geometric_pairs(words, 1).size(), pairs.size());
  EXPECT_THROW(train_geometric({}), std::invalid_argument);
  EXPECT_THROW(train_geometric({{{0, 0, 1, 1}, {1, 0, 1, 1}, true}}), std::invalid_argument);

  const auto back = geometric_from_json(geometric_to_json(z));
  EXPECT_EQ(back, z);
  EXPECT_THROW(geometric_from_json(nlohmann::json{{"weights", {1, 2}}, {"bias", 0}}), DataError);
}

TEST(Lexicon, CommentsAndWhitespace) {
  std::stringstream ss("# header\n  MADE \nman # trailing\n\n\tdog\r\n");
  EXPECT_EQ(read_lexicon(ss), (std::vector<std::string>{"MADE", "man", "dog"}));
  std::stringstream out;
  write_lexicon({"a", "b"}, out);
  EXPECT_EQ(out.str(), "a\nb\n");
  EXPECT_THROW(load_lexicon("/nonexistent/lexicon.txt"), DataError);
}

}  // namespace
}  // namespace hsc

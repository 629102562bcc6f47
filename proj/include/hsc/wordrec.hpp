// Copyright 2026 The HSC Text Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License. You may
// obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Lexicon-driven word spotting. A word W = w_1..w_n is matched to the image by
// picking one candidate u_i of label w_i per character and scoring
//
//   O = sum_i S(w_i, u_i) + lambda1 * sum_i Z(u_i, u_{i+1}) + lambda2 * n
//
// where S is the detection score and Z a linear geometric compatibility
// model. The best chain is found by dynamic programming over positions.

#pragma once

#include <optional>

#include "hsc/detector.hpp"

namespace hsc {

struct PSParams {
  double lambda1 = 1.0;
  double lambda2 = -1.0;

  void validate() const {
    if (!std::isfinite(lambda1) || !std::isfinite(lambda2)) throw std::invalid_argument("params: non-finite value");
    if (!(lambda1 > 0)) throw std::invalid_argument("params: lambda1 must be positive");
    if (!(lambda2 < 0)) throw std::invalid_argument("params: lambda2 must be negative");
  }
  friend bool operator==(const PSParams&, const PSParams&) = default;
};

inline constexpr int kPairFeatures = 6;
using PairFeatures = std::array<double, kPairFeatures>;

struct GeometricModel {
  PairFeatures weights{};
  double bias = 0;
  friend bool operator==(const GeometricModel&, const GeometricModel&) = default;
};

// [width ratio, height ratio, IoU, horizontal gap / w_i,
//  |top_i - top_j| / h_i, |bottom_i - bottom_j| / h_i]
inline PairFeatures pair_features(const Box& a, const Box& b) {
  if (!a.valid() || !b.valid()) throw std::invalid_argument("pair_features: zero-sized box");
  return {std::min(a.width, b.width) / std::max(a.width, b.width),
          std::min(a.height, b.height) / std::max(a.height, b.height),
          iou(a, b),
          (b.x - a.right()) / a.width,
          std::abs(a.y - b.y) / a.height,
          std::abs(a.bottom() - b.bottom()) / a.height};
}

inline double geometric_score(const GeometricModel& z, const Box& a, const Box& b) {
  const PairFeatures f = pair_features(a, b);
  double s = z.bias;
  for (int i = 0; i < kPairFeatures; ++i) s += z.weights[static_cast<size_t>(i)] * f[static_cast<size_t>(i)];
  return s;
}

inline double geometric_score(const GeometricModel& z, const CharCandidate& a, const CharCandidate& b) {
  return geometric_score(z, a.box, b.box);
}

// Search-space pruning between consecutive characters.
struct PruningRules {
  double max_gap_widths = 3.0;
  double max_pair_iou = 0.5;
};

inline bool feasible_successor(const CharCandidate& prev, const CharCandidate& next, const PruningRules& rules = {}) {
  if (!(next.box.x > prev.box.x)) return false;
  if (next.box.x - prev.box.right() > rules.max_gap_widths * prev.box.width) return false;
  return iou(prev.box, next.box) <= rules.max_pair_iou;
}

struct Configuration {
  std::string word;
  std::vector<CharCandidate> chosen;
  double objective = 0;
};

inline bool same_chain(const Configuration& a, const Configuration& b) {
  return a.word == b.word && a.chosen == b.chosen;
}

// Evaluated as (sum of detection scores) + lambda1 * (sum of pair scores) + lambda2 * n.
inline double word_objective(const std::vector<CharCandidate>& chosen, const GeometricModel& z, const PSParams& params) {
  if (chosen.empty()) throw std::invalid_argument("word_objective: empty configuration");
  double unary = 0;
  for (const auto& c : chosen) unary += c.score;
  double pair = 0;
  for (size_t i = 0; i + 1 < chosen.size(); ++i) pair += geometric_score(z, chosen[i], chosen[i + 1]);
  return unary + params.lambda1 * pair + params.lambda2 * static_cast<double>(chosen.size());
}

inline double word_objective(const Configuration& config, const GeometricModel& z, const PSParams& params) {
  return word_objective(config.chosen, z, params);
}

// Chain tie-break order: x, then y, then size, then higher score.
inline bool chain_key_less(const CharCandidate& a, const CharCandidate& b) {
  if (a.box.x != b.box.x) return a.box.x < b.box.x;
  if (a.box.y != b.box.y) return a.box.y < b.box.y;
  if (a.box.width != b.box.width) return a.box.width < b.box.width;
  if (a.box.height != b.box.height) return a.box.height < b.box.height;
  if (a.score != b.score) return a.score > b.score;
  return a.scale_index < b.scale_index;
}

// Candidates grouped by character label, each group in chain_key_less order.
struct CandidateSets {
  std::array<std::vector<CharCandidate>, kBackground> by_label;

  CandidateSets() = default;
  explicit CandidateSets(const std::vector<CharCandidate>& candidates) {
    for (const auto& c : candidates) {
      if (c.label < 0 || c.label >= kBackground) throw std::invalid_argument("candidate sets: invalid label");
      by_label[static_cast<size_t>(c.label)].push_back(c);
    }
    for (auto& v : by_label) std::stable_sort(v.begin(), v.end(), chain_key_less);
  }
  const std::vector<CharCandidate>& of(int label) const { return by_label[static_cast<size_t>(label)]; }
};

enum class MatchStatus { Found, MissingLabel, Infeasible };

inline std::string to_string(MatchStatus s) {
  switch (s) {
    case MatchStatus::Found: return "found";
    case MatchStatus::MissingLabel: return "missing_label";
    default: return "infeasible";
  }
}

struct MatchResult {
  MatchStatus status = MatchStatus::Infeasible;
  std::optional<Configuration> config;
};

inline std::optional<std::vector<int>> word_labels(std::string_view word) {
  std::vector<int> out;
  for (char ch : word) {
    const int l = label_of(ch);
    if (l < 0) return std::nullopt;
    out.push_back(l);
  }
  return out;
}

namespace detail {

// Max-objective chain through per-position candidate lists (each in
// chain_key_less order). Backward DP; on equal values the earliest list
// entry wins, which yields the lexicographically smallest optimal chain.
inline std::optional<std::vector<CharCandidate>> best_chain(const std::vector<const std::vector<CharCandidate>*>& lists,
                                                            const GeometricModel& z, const PSParams& params,
                                                            const PruningRules& rules) {
  const size_t n = lists.size();
  constexpr double kNone = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> value(n);
  std::vector<std::vector<int>> next(n);
  value[n - 1].resize(lists[n - 1]->size());
  next[n - 1].assign(lists[n - 1]->size(), -1);
  for (size_t a = 0; a < lists[n - 1]->size(); ++a) value[n - 1][a] = (*lists[n - 1])[a].score;
  for (size_t i = n - 1; i-- > 0;) {
    const auto& cur = *lists[i];
    const auto& succ = *lists[i + 1];
    value[i].assign(cur.size(), kNone);
    next[i].assign(cur.size(), -1);
    for (size_t a = 0; a < cur.size(); ++a) {
      double best = kNone;
      int arg = -1;
      for (size_t b = 0; b < succ.size(); ++b) {
        if (value[i + 1][b] == kNone || !feasible_successor(cur[a], succ[b], rules)) continue;
        const double v = params.lambda1 * geometric_score(z, cur[a], succ[b]) + value[i + 1][b];
        if (v > best) {
          best = v;
          arg = static_cast<int>(b);
        }
      }
      if (arg >= 0) {
        value[i][a] = cur[a].score + best;
        next[i][a] = arg;
      }
    }
  }
  int start = -1;
  double best = kNone;
  for (size_t a = 0; a < lists[0]->size(); ++a)
    if (value[0][a] > best) {
      best = value[0][a];
      start = static_cast<int>(a);
    }
  if (start < 0) return std::nullopt;
  std::vector<CharCandidate> chain;
  int at = start;
  for (size_t i = 0; i < n; ++i) {
    chain.push_back((*lists[i])[static_cast<size_t>(at)]);
    at = next[i][static_cast<size_t>(at)];
  }
  return chain;
}

}  // namespace detail

inline MatchResult best_config(std::string_view word, const CandidateSets& sets, const GeometricModel& z,
                               const PSParams& params, const PruningRules& rules = {}) {
  MatchResult res;
  const auto labels = word_labels(word);
  if (!labels || labels->empty()) {
    res.status = MatchStatus::MissingLabel;
    return res;
  }
  std::vector<const std::vector<CharCandidate>*> lists;
  for (int l : *labels) {
    if (sets.of(l).empty()) {
      res.status = MatchStatus::MissingLabel;
      return res;
    }
    lists.push_back(&sets.of(l));
  }
  auto chain = detail::best_chain(lists, z, params, rules);
  if (!chain) {
    res.status = MatchStatus::Infeasible;
    return res;
  }
  res.status = MatchStatus::Found;
  Configuration cfg{std::string(word), std::move(*chain), 0};
  cfg.objective = word_objective(cfg, z, params);
  res.config = std::move(cfg);
  return res;
}

// Best configuration of `word` that differs from `excluded` in at least one
// position. Partitions the alternatives by the first differing position.
inline MatchResult best_config_excluding(std::string_view word, const CandidateSets& sets, const GeometricModel& z,
                                         const PSParams& params, const std::vector<CharCandidate>& excluded,
                                         const PruningRules& rules = {}) {
  MatchResult res = best_config(word, sets, z, params, rules);
  if (res.status != MatchStatus::Found || res.config->chosen != excluded) return res;
  const auto labels = *word_labels(word);
  if (excluded.size() != labels.size()) return res;

  MatchResult best;
  best.status = MatchStatus::Infeasible;
  for (size_t p = 0; p < labels.size(); ++p) {
    std::vector<std::vector<CharCandidate>> owned(labels.size());
    std::vector<const std::vector<CharCandidate>*> lists(labels.size());
    for (size_t i = 0; i < labels.size(); ++i) {
      const auto& all = sets.of(labels[i]);
      if (i < p) {
        owned[i] = {excluded[i]};
      } else if (i == p) {
        for (const auto& c : all)
          if (!(c == excluded[i])) owned[i].push_back(c);
      } else {
        lists[i] = &all;
        continue;
      }
      lists[i] = &owned[i];
    }
    if (owned[p].empty()) continue;
    auto chain = detail::best_chain(lists, z, params, rules);
    if (!chain) continue;
    Configuration cfg{std::string(word), std::move(*chain), 0};
    cfg.objective = word_objective(cfg, z, params);
    const bool better = !best.config || cfg.objective > best.config->objective ||
                        (cfg.objective == best.config->objective &&
                         std::lexicographical_compare(cfg.chosen.begin(), cfg.chosen.end(), best.config->chosen.begin(),
                                                      best.config->chosen.end(), chain_key_less));
    if (better) {
      best.status = MatchStatus::Found;
      best.config = std::move(cfg);
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Word spotting

struct SpotResult {
  std::string word;
  double objective = -std::numeric_limits<double>::infinity();
  MatchStatus status = MatchStatus::Infeasible;
  std::optional<Configuration> config;
};

// Objective descending (unmatched words carry -inf and sink), ties by word.
inline void rank_spot_results(std::vector<SpotResult>& results) {
  std::stable_sort(results.begin(), results.end(), [](const SpotResult& a, const SpotResult& b) {
    if (a.objective != b.objective) return a.objective > b.objective;
    return a.word < b.word;
  });
}

inline std::vector<std::string> dedup_lexicon(const std::vector<std::string>& lexicon) {
  std::vector<std::string> out;
  for (const auto& w : lexicon)
    if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
  return out;
}

inline std::vector<SpotResult> spot_word(const CandidateSets& sets, const std::vector<std::string>& lexicon,
                                         const GeometricModel& z, const PSParams& params, int threads = 1,
                                         const PruningRules& rules = {}) {
  if (lexicon.empty()) throw std::invalid_argument("spot_word: empty lexicon");
  const auto words = dedup_lexicon(lexicon);
  std::vector<SpotResult> results(words.size());
  parallel_for(words.size(), threads, [&](size_t i) {
    auto m = best_config(words[i], sets, z, params, rules);
    results[i].word = words[i];
    results[i].status = m.status;
    if (m.config) {
      results[i].objective = m.config->objective;
      results[i].config = std::move(m.config);
    }
  });
  rank_spot_results(results);
  return results;
}

inline std::vector<SpotResult> spot_word(const std::vector<CharCandidate>& candidates,
                                         const std::vector<std::string>& lexicon, const GeometricModel& z,
                                         const PSParams& params, int threads = 1) {
  return spot_word(CandidateSets(candidates), lexicon, z, params, threads);
}

// ---------------------------------------------------------------------------
// Geometric model training: linear SVM on pair features.

struct PairExample {
  Box first;
  Box second;
  bool compatible = false;
};

inline GeometricModel train_geometric(const std::vector<PairExample>& pairs, SvmConfig cfg = {}) {
  if (pairs.empty()) throw std::invalid_argument("train_geometric: no pairs");
  FeatureMatrix X(static_cast<Eigen::Index>(pairs.size()), kPairFeatures);
  std::vector<int> signs;
  bool pos = false, neg = false;
  for (size_t i = 0; i < pairs.size(); ++i) {
    const auto f = pair_features(pairs[i].first, pairs[i].second);
    for (int j = 0; j < kPairFeatures; ++j) X(static_cast<Eigen::Index>(i), j) = static_cast<float>(f[static_cast<size_t>(j)]);
    signs.push_back(pairs[i].compatible ? 1 : -1);
    (pairs[i].compatible ? pos : neg) = true;
  }
  if (!pos || !neg) throw std::invalid_argument("train_geometric: need both compatible and incompatible pairs");
  const BinarySvm svm = train_binary_svm(X, signs, cfg);
  GeometricModel z;
  for (int j = 0; j < kPairFeatures; ++j) z.weights[static_cast<size_t>(j)] = svm.weights[j];
  z.bias = svm.bias;
  return z;
}

inline double pair_accuracy(const GeometricModel& z, const std::vector<PairExample>& pairs) {
  if (pairs.empty()) return 0;
  size_t ok = 0;
  for (const auto& p : pairs) ok += ((geometric_score(z, p.first, p.second) > 0) == p.compatible) ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(pairs.size());
}

// ---------------------------------------------------------------------------
// Lexicon files: UTF-8 text, one word per line, '#' starts a comment.

inline std::vector<std::string> read_lexicon(std::istream& is) {
  std::vector<std::string> words;
  std::string line;
  while (std::getline(is, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto b = line.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r\n");
    words.push_back(line.substr(b, e - b + 1));
  }
  return words;
}

inline std::vector<std::string> load_lexicon(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open lexicon: " + path);
  return read_lexicon(is);
}

inline void write_lexicon(const std::vector<std::string>& words, std::ostream& os) {
  for (const auto& w : words) os << w << '\n';
}

// Recognition report line: {image, top_word, objective, runner_up, margin}.
// Non-finite numbers are written as null.
struct RecognitionReport {
  std::string image;
  std::string top_word;
  double objective = -std::numeric_limits<double>::infinity();
  std::string runner_up;
  double margin = std::numeric_limits<double>::infinity();
};

inline RecognitionReport make_report(std::string image, const std::vector<SpotResult>& ranked) {
  RecognitionReport r;
  r.image = std::move(image);
  if (ranked.empty()) return r;
  r.top_word = ranked[0].word;
  r.objective = ranked[0].objective;
  if (ranked.size() > 1) {
    r.runner_up = ranked[1].word;
    r.margin = ranked[0].objective - ranked[1].objective;
  }
  return r;
}

inline nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

inline nlohmann::json report_to_json(const RecognitionReport& r) {
  return {{"image", r.image},
          {"top_word", r.top_word},
          {"objective", finite_or_null(r.objective)},
          {"runner_up", r.runner_up},
          {"margin", finite_or_null(r.margin)}};
}

inline nlohmann::json geometric_to_json(const GeometricModel& z) {
  return {{"weights", z.weights}, {"bias", z.bias}};
}

inline GeometricModel geometric_from_json(const nlohmann::json& j) {
  GeometricModel z;
  try {
    const auto w = j.at("weights").get<std::vector<double>>();
    if (w.size() != kPairFeatures) throw DataError("geometric model: expected 6 weights");
    std::copy(w.begin(), w.end(), z.weights.begin());
    z.bias = j.at("bias").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("geometric model: ") + e.what());
  }
  return z;
}

}  // namespace hsc

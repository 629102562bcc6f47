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

// Minimum classification error training of the word-model coefficients
// (lambda1, lambda2). The misclassification measure compares the fixed
// ground-truth configuration against the best rival (word, configuration)
// pair and is squashed by a sigmoid; SGD descends the resulting loss.

#pragma once

#include "hsc/wordrec.hpp"

namespace hsc {

struct TrainingSample {
  CandidateSets candidates;
  std::string truth_word;
  std::vector<CharCandidate> truth_config;
  std::vector<std::string> lexicon;
};

struct MCEConfig {
  double xi = 1.0;
  double learning_rate = 0.1;  // epsilon_0
  double decay = 0;            // tau; 0 means |dataset|
  int epochs = 10;
  uint64_t seed = 1;
  int threads = 1;
};

inline constexpr double kMinLambda1 = 1e-6;
inline constexpr double kMaxLambda2 = -1e-6;

inline double sigmoid_loss(double d, double xi = 1.0) {
  const double t = xi * d;
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

struct Rival {
  std::string word;
  Configuration config;
};

// Highest-scoring (word, configuration) other than the ground truth; the
// truth word itself may supply the rival through a different chain.
inline std::optional<Rival> rival_search(const TrainingSample& s, const GeometricModel& z, const PSParams& params,
                                         int threads = 1) {
  const auto words = dedup_lexicon(s.lexicon);
  std::vector<MatchResult> best(words.size());
  parallel_for(words.size(), threads, [&](size_t i) {
    best[i] = words[i] == s.truth_word ? best_config_excluding(words[i], s.candidates, z, params, s.truth_config)
                                       : best_config(words[i], s.candidates, z, params);
  });
  std::optional<Rival> rival;
  for (size_t i = 0; i < words.size(); ++i) {
    if (!best[i].config) continue;
    const auto& cfg = *best[i].config;
    if (!rival || cfg.objective > rival->config.objective ||
        (cfg.objective == rival->config.objective && words[i] < rival->word))
      rival = Rival{words[i], cfg};
  }
  return rival;
}

struct Misclassification {
  double d = 0;
  double truth_objective = 0;
  double rival_objective = 0;
  Rival rival;
};

inline double truth_objective(const TrainingSample& s, const GeometricModel& z, const PSParams& params) {
  return word_objective(s.truth_config, z, params);
}

// d = -g(truth) + g(rival); nullopt when no rival is feasible.
inline std::optional<Misclassification> misclassification(const TrainingSample& s, const GeometricModel& z,
                                                          const PSParams& params, int threads = 1) {
  auto rival = rival_search(s, z, params, threads);
  if (!rival) return std::nullopt;
  Misclassification m;
  m.truth_objective = truth_objective(s, z, params);
  m.rival_objective = rival->config.objective;
  m.d = m.rival_objective - m.truth_objective;
  m.rival = std::move(*rival);
  return m;
}

inline double pair_score_sum(const std::vector<CharCandidate>& chain, const GeometricModel& z) {
  double s = 0;
  for (size_t i = 0; i + 1 < chain.size(); ++i) s += geometric_score(z, chain[i], chain[i + 1]);
  return s;
}

// Partial derivatives of d with both configurations held fixed.
inline std::array<double, 2> misclassification_gradient(const std::vector<CharCandidate>& truth,
                                                        const std::vector<CharCandidate>& rival,
                                                        const GeometricModel& z) {
  return {pair_score_sum(rival, z) - pair_score_sum(truth, z),
          static_cast<double>(rival.size()) - static_cast<double>(truth.size())};
}

inline PSParams project(PSParams p) {
  p.lambda1 = std::max(p.lambda1, kMinLambda1);
  p.lambda2 = std::min(p.lambda2, kMaxLambda2);
  return p;
}

// One SGD update: params -= lr * xi * l * (1 - l) * grad d.
inline PSParams mce_step(const TrainingSample& s, const Misclassification& m, const PSParams& params,
                         const GeometricModel& z, double lr, double xi) {
  const double l = sigmoid_loss(m.d, xi);
  const auto grad = misclassification_gradient(s.truth_config, m.rival.config.chosen, z);
  const double scale = lr * xi * l * (1 - l);
  PSParams next = params;
  next.lambda1 -= scale * grad[0];
  next.lambda2 -= scale * grad[1];
  return project(next);
}

inline std::optional<PSParams> mce_step(const TrainingSample& s, const PSParams& params, const GeometricModel& z,
                                        double lr, double xi) {
  const auto m = misclassification(s, z, params);
  if (!m) return std::nullopt;
  return mce_step(s, *m, params, z, lr, xi);
}

struct EpochStats {
  int epoch = 0;  // 0 is the initial parameters
  double mean_loss = 0;
  double accuracy = 0;
  size_t evaluated = 0;
};

struct MCEResult {
  PSParams params;
  std::vector<EpochStats> trace;
  size_t skipped = 0;
};

// Mean sigmoid loss and word accuracy (top-ranked word equals the truth) over
// every sample that has a feasible rival.
inline EpochStats evaluate_mce(const std::vector<TrainingSample>& data, const GeometricModel& z, const PSParams& params,
                               double xi = 1.0, int threads = 1) {
  EpochStats st;
  std::vector<std::optional<Misclassification>> ms(data.size());
  parallel_for(data.size(), threads, [&](size_t i) { ms[i] = misclassification(data[i], z, params); });
  std::vector<char> hit(data.size(), 0);
  parallel_for(data.size(), threads, [&](size_t i) {
    if (!ms[i]) return;
    const auto ranked = spot_word(data[i].candidates, data[i].lexicon, z, params);
    hit[i] = ranked.front().word == data[i].truth_word ? 1 : 0;
  });
  double loss = 0;
  size_t correct = 0;
  for (size_t i = 0; i < data.size(); ++i) {
    if (!ms[i]) continue;
    ++st.evaluated;
    loss += sigmoid_loss(ms[i]->d, xi);
    correct += static_cast<size_t>(hit[i]);
  }
  if (st.evaluated > 0) {
    st.mean_loss = loss / static_cast<double>(st.evaluated);
    st.accuracy = static_cast<double>(correct) / static_cast<double>(st.evaluated);
  }
  return st;
}

inline MCEResult mce_train(const std::vector<TrainingSample>& data, const GeometricModel& z, const PSParams& init,
                           const MCEConfig& cfg) {
  if (data.empty()) throw std::invalid_argument("mce_train: empty dataset");
  if (!(cfg.xi > 0) || !(cfg.learning_rate >= 0) || cfg.epochs < 0) throw std::invalid_argument("mce_train: bad config");
  init.validate();
  MCEResult res;
  res.params = init;
  auto stats = evaluate_mce(data, z, init, cfg.xi, cfg.threads);
  if (stats.evaluated == 0) throw std::invalid_argument("mce_train: every sample lacks a feasible rival");
  res.skipped = data.size() - stats.evaluated;
  res.trace.push_back(stats);

  const double tau = cfg.decay > 0 ? cfg.decay : static_cast<double>(data.size());
  std::vector<size_t> order(data.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(cfg.seed);
  size_t t = 0;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    shuffle(order, rng);
    for (size_t i : order) {
      const double lr = cfg.learning_rate / (1.0 + static_cast<double>(t) / tau);
      if (auto next = mce_step(data[i], res.params, z, lr, cfg.xi)) {
        res.params = *next;
        ++t;
      }
    }
    stats = evaluate_mce(data, z, res.params, cfg.xi, cfg.threads);
    stats.epoch = epoch;
    res.trace.push_back(stats);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Params file: {lambda1, lambda2, geometric: {weights, bias}, metadata}.

inline nlohmann::json params_to_json(const PSParams& p, const GeometricModel& z, const nlohmann::json& metadata = {}) {
  return {{"lambda1", p.lambda1}, {"lambda2", p.lambda2}, {"geometric", geometric_to_json(z)}, {"metadata", metadata}};
}

inline std::pair<PSParams, GeometricModel> params_from_json(const nlohmann::json& j) {
  PSParams p;
  GeometricModel z;
  try {
    p.lambda1 = j.at("lambda1").get<double>();
    p.lambda2 = j.at("lambda2").get<double>();
    if (j.contains("geometric")) z = geometric_from_json(j.at("geometric"));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("params: ") + e.what());
  }
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  return {p, z};
}

inline void write_loss_trace(const std::vector<EpochStats>& trace, std::ostream& os) {
  os << "epoch,mean_loss,accuracy\n";
  std::ostringstream line;
  line.precision(17);
  for (const auto& s : trace) {
    line.str("");
    line << s.epoch << ',' << s.mean_loss << ',' << s.accuracy << '\n';
    os << line.str();
  }
}

}  // namespace hsc

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

// Multi-class character classifiers (linear one-vs-rest SVM, per-class sparse
// coding, random ferns) and the background-relative detection score.

#pragma once

#include <span>
#include <variant>

#include "hsc/features.hpp"

namespace hsc {

// ---------------------------------------------------------------------------
// Label set: digits, upper case, lower case, then BACKGROUND.

inline constexpr int kNumLabels = 63;
inline constexpr int kBackground = 62;
inline constexpr std::string_view kBackgroundName = "BACKGROUND";

inline int label_of(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'Z') return 10 + (c - 'A');
  if (c >= 'a' && c <= 'z') return 36 + (c - 'a');
  return -1;
}

inline char label_char(int label) {
  if (label >= 0 && label < 10) return static_cast<char>('0' + label);
  if (label >= 10 && label < 36) return static_cast<char>('A' + label - 10);
  if (label >= 36 && label < 62) return static_cast<char>('a' + label - 36);
  throw std::invalid_argument("label_char: not a character label");
}

inline const std::vector<std::string>& character_labels() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (int i = 0; i < kBackground; ++i) v.emplace_back(1, label_char(i));
    v.emplace_back(kBackgroundName);
    return v;
  }();
  return names;
}

inline int label_from_name(std::string_view name) {
  if (name == kBackgroundName) return kBackground;
  if (name.size() == 1) return label_of(name[0]);
  return -1;
}

// ---------------------------------------------------------------------------

using FeatureMatrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Dataset {
  FeatureMatrix features;  // n x d
  std::vector<int> labels;
  std::vector<std::string> label_names = character_labels();

  size_t size() const { return labels.size(); }
  int dim() const { return static_cast<int>(features.cols()); }
  int num_classes() const { return static_cast<int>(label_names.size()); }
};

inline Dataset make_dataset(const std::vector<FeatureVector>& rows, std::vector<int> labels,
                            std::vector<std::string> names = character_labels()) {
  if (rows.size() != labels.size()) throw std::invalid_argument("dataset: feature/label count mismatch");
  Dataset ds;
  ds.label_names = std::move(names);
  const size_t d = rows.empty() ? 0 : rows.front().size();
  ds.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) throw std::invalid_argument("dataset: ragged feature rows");
    for (size_t j = 0; j < d; ++j)
      ds.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<float>(rows[i][j]);
  }
  for (int l : labels)
    if (l < 0 || l >= ds.num_classes()) throw std::invalid_argument("dataset: label out of range");
  ds.labels = std::move(labels);
  return ds;
}

namespace detail {

inline void require_all_classes(const Dataset& ds) {
  if (ds.size() < static_cast<size_t>(ds.num_classes()))
    throw std::invalid_argument("training: fewer samples than classes");
  std::vector<int> seen(static_cast<size_t>(ds.num_classes()), 0);
  for (int l : ds.labels) seen[static_cast<size_t>(l)] = 1;
  for (size_t c = 0; c < seen.size(); ++c)
    if (!seen[c]) throw std::invalid_argument("training: class '" + ds.label_names[c] + "' has no samples");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Linear SVM, hinge loss, solved in the dual by coordinate descent.
// Objective: 0.5*|w|^2 + C * mean_i hinge(y_i (w.x_i + b)). The bias is an
// extra constant feature and is regularized with w.

struct SvmConfig {
  double C = 1000.0;
  double tolerance = 1e-3;
  int max_epochs = 500;
  uint64_t seed = 1;
  int threads = 1;
};

struct BinarySvm {
  Eigen::VectorXd weights;
  double bias = 0;
  int epochs = 0;
  double decision(const Eigen::Ref<const Eigen::VectorXd>& f) const { return weights.dot(f) + bias; }
};

using SvmMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Dual coordinate descent with active-set shrinking; stops when the spread of
// projected gradients over the full set falls below cfg.tolerance.
inline BinarySvm train_binary_svm(const SvmMatrix& X, std::span<const int> signs, const SvmConfig& cfg) {
  const auto n = X.rows();
  if (static_cast<size_t>(n) != signs.size() || n == 0) throw std::invalid_argument("svm: bad training set");
  if (!(cfg.C > 0)) throw std::invalid_argument("svm: C must be positive");
  const double upper = cfg.C / static_cast<double>(n);
  const double bias_feature = 1.0;
  const double inf = std::numeric_limits<double>::infinity();

  BinarySvm model;
  model.weights = Eigen::VectorXd::Zero(X.cols());
  std::vector<double> alpha(static_cast<size_t>(n), 0.0);
  std::vector<double> qdiag(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) qdiag[static_cast<size_t>(i)] = X.row(i).squaredNorm() + bias_feature * bias_feature;
  std::vector<Eigen::Index> active(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) active[static_cast<size_t>(i)] = i;
  Rng rng(cfg.seed);
  double pg_max_old = inf, pg_min_old = -inf;

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    model.epochs = epoch + 1;
    shuffle(active, rng);
    double pg_max = -inf, pg_min = inf;
    std::vector<Eigen::Index> kept;
    kept.reserve(active.size());
    for (Eigen::Index i : active) {
      const auto si = static_cast<size_t>(i);
      const double y = signs[si];
      const double g = y * (X.row(i).dot(model.weights) + model.bias * bias_feature) - 1.0;
      double pg = 0;
      if (alpha[si] == 0) {
        if (g > pg_max_old) continue;
        pg = std::min(g, 0.0);
      } else if (alpha[si] == upper) {
        if (g < pg_min_old) continue;
        pg = std::max(g, 0.0);
      } else {
        pg = g;
      }
      kept.push_back(i);
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);
      if (std::abs(pg) > 1e-12) {
        const double old = alpha[si];
        alpha[si] = std::clamp(old - g / qdiag[si], 0.0, upper);
        const double delta = (alpha[si] - old) * y;
        model.weights += delta * X.row(i).transpose();
        model.bias += delta * bias_feature;
      }
    }
    const bool full = kept.size() == static_cast<size_t>(n);
    active = std::move(kept);
    if (pg_max - pg_min < cfg.tolerance || active.empty()) {
      if (full) break;
      // Converged on the shrunk set: re-check every sample once more.
      active.resize(static_cast<size_t>(n));
      for (Eigen::Index i = 0; i < n; ++i) active[static_cast<size_t>(i)] = i;
      pg_max_old = inf;
      pg_min_old = -inf;
      continue;
    }
    pg_max_old = pg_max > 0 ? pg_max : inf;
    pg_min_old = pg_min < 0 ? pg_min : -inf;
  }
  return model;
}

inline BinarySvm train_binary_svm(const FeatureMatrix& X, std::span<const int> signs, const SvmConfig& cfg) {
  return train_binary_svm(SvmMatrix(X.cast<double>()), signs, cfg);
}

struct LinearModel {
  std::vector<std::string> labels = character_labels();
  Eigen::MatrixXd weights;  // classes x d
  Eigen::VectorXd bias;

  int feature_dim() const { return static_cast<int>(weights.cols()); }
};

// One-vs-rest over every class in the dataset's label set.
inline LinearModel train_linear(const Dataset& ds, const SvmConfig& cfg) {
  detail::require_all_classes(ds);
  const int classes = ds.num_classes();
  LinearModel model;
  model.labels = ds.label_names;
  model.weights.resize(classes, ds.dim());
  model.bias.resize(classes);
  const SvmMatrix X = ds.features.cast<double>();
  parallel_for(static_cast<size_t>(classes), cfg.threads, [&](size_t c) {
    std::vector<int> signs(ds.size());
    for (size_t i = 0; i < ds.size(); ++i) signs[i] = ds.labels[i] == static_cast<int>(c) ? 1 : -1;
    SvmConfig sub = cfg;
    sub.seed = cfg.seed + c;
    const BinarySvm b = train_binary_svm(X, signs, sub);
    model.weights.row(static_cast<Eigen::Index>(c)) = b.weights.transpose();
    model.bias[static_cast<Eigen::Index>(c)] = b.bias;
  });
  return model;
}

// ---------------------------------------------------------------------------
// Sparse-coding classifier: one K-SVD dictionary per class, decision by
// minimum reconstruction error.

struct SCModel {
  std::vector<std::string> labels = character_labels();
  std::vector<Dictionary> dictionaries;
  int sparsity = 1;

  int basis() const { return dictionaries.empty() ? 0 : dictionaries.front().k(); }
  int feature_dim() const { return dictionaries.empty() ? 0 : dictionaries.front().m(); }
};

struct SCConfig {
  int basis = 100;
  int sparsity = 5;
  int iterations = 10;
  uint64_t seed = 1;
  int threads = 1;
};

inline SCModel train_sc(const Dataset& ds, const SCConfig& cfg) {
  detail::require_all_classes(ds);
  const int classes = ds.num_classes();
  std::vector<std::vector<Eigen::Index>> members(static_cast<size_t>(classes));
  for (size_t i = 0; i < ds.size(); ++i) members[static_cast<size_t>(ds.labels[i])].push_back(static_cast<Eigen::Index>(i));
  for (int c = 0; c < classes; ++c)
    if (members[static_cast<size_t>(c)].size() < static_cast<size_t>(cfg.basis))
      throw std::invalid_argument("train_sc: class '" + ds.label_names[static_cast<size_t>(c)] +
                                  "' has fewer samples than basis vectors");
  const int sparsity = std::min({cfg.sparsity, cfg.basis, ds.dim()});
  SCModel model;
  model.labels = ds.label_names;
  model.sparsity = sparsity;
  model.dictionaries.resize(static_cast<size_t>(classes));
  parallel_for(static_cast<size_t>(classes), cfg.threads, [&](size_t c) {
    const auto& idx = members[c];
    Eigen::MatrixXd X(ds.dim(), static_cast<Eigen::Index>(idx.size()));
    for (size_t s = 0; s < idx.size(); ++s) X.col(static_cast<Eigen::Index>(s)) = ds.features.row(idx[s]).cast<double>().transpose();
    KsvdOptions opt;
    opt.atoms = cfg.basis;
    opt.sparsity = sparsity;
    opt.iterations = cfg.iterations;
    opt.seed = cfg.seed + c;
    model.dictionaries[c] = ksvd_learn_traced(X, opt).dictionary;
  });
  return model;
}

// ---------------------------------------------------------------------------
// Random ferns: each fern applies `depth` binary tests (feature > threshold)
// and indexes a table of Laplace-smoothed class log-likelihoods. Scores are
// summed over ferns (semi-naive Bayes).

struct FernTest {
  int feature = 0;
  double threshold = 0;
};

struct FernsModel {
  std::vector<std::string> labels = character_labels();
  int feature_dim = 0;
  int ferns = 0;
  int depth = 0;
  std::vector<FernTest> tests;      // ferns * depth
  std::vector<double> log_probs;    // ferns * 2^depth * classes

  int num_classes() const { return static_cast<int>(labels.size()); }
  size_t leaves() const { return size_t{1} << depth; }
  size_t leaf_of(int fern, const float* f) const {
    size_t leaf = 0;
    for (int t = 0; t < depth; ++t) {
      const auto& test = tests[static_cast<size_t>(fern * depth + t)];
      leaf = (leaf << 1) | (f[test.feature] > test.threshold ? 1u : 0u);
    }
    return leaf;
  }
};

struct FernsConfig {
  int ferns = 50;
  int depth = 8;
  uint64_t seed = 1;
};

// Fills the leaf tables of a model whose tests are already set.
inline void fit_fern_tables(FernsModel& model, const Dataset& ds) {
  const int classes = model.num_classes();
  const size_t leaves = model.leaves();
  std::vector<double> counts(static_cast<size_t>(model.ferns) * leaves * classes, 0.0);
  std::vector<double> class_totals(static_cast<size_t>(classes), 0.0);
  for (size_t i = 0; i < ds.size(); ++i) {
    const float* f = ds.features.row(static_cast<Eigen::Index>(i)).data();
    const int y = ds.labels[i];
    class_totals[static_cast<size_t>(y)] += 1;
    for (int fern = 0; fern < model.ferns; ++fern)
      counts[(static_cast<size_t>(fern) * leaves + model.leaf_of(fern, f)) * classes + y] += 1;
  }
  model.log_probs.resize(counts.size());
  for (int fern = 0; fern < model.ferns; ++fern)
    for (size_t leaf = 0; leaf < leaves; ++leaf)
      for (int c = 0; c < classes; ++c) {
        const size_t at = (static_cast<size_t>(fern) * leaves + leaf) * classes + c;
        model.log_probs[at] = std::log((counts[at] + 1.0) / (class_totals[static_cast<size_t>(c)] + static_cast<double>(leaves)));
      }
}

inline FernsModel train_ferns(const Dataset& ds, const FernsConfig& cfg) {
  detail::require_all_classes(ds);
  if (cfg.ferns < 1 || cfg.depth < 1 || cfg.depth > 20) throw std::invalid_argument("ferns: bad fern shape");
  FernsModel model;
  model.labels = ds.label_names;
  model.feature_dim = ds.dim();
  model.ferns = cfg.ferns;
  model.depth = cfg.depth;
  Rng rng(cfg.seed);
  std::vector<float> column(ds.size());
  for (int t = 0; t < cfg.ferns * cfg.depth; ++t) {
    FernTest test;
    test.feature = static_cast<int>(uniform_index(rng, static_cast<size_t>(ds.dim())));
    for (size_t i = 0; i < ds.size(); ++i) column[i] = ds.features(static_cast<Eigen::Index>(i), test.feature);
    std::sort(column.begin(), column.end());
    const size_t q = uniform_index(rng, column.size());
    test.threshold = column[q];
    model.tests.push_back(test);
  }
  fit_fern_tables(model, ds);
  return model;
}

// ---------------------------------------------------------------------------
// Classification and calibration

using CharClassifier = std::variant<LinearModel, SCModel, FernsModel>;

inline int feature_dim(const CharClassifier& m) {
  return std::visit(
      [](const auto& model) {
        if constexpr (std::is_same_v<std::decay_t<decltype(model)>, FernsModel>) return model.feature_dim;
        else return model.feature_dim();
      },
      m);
}

inline const std::vector<std::string>& model_labels(const CharClassifier& m) {
  return std::visit([](const auto& model) -> const std::vector<std::string>& { return model.labels; }, m);
}

struct ClassScores {
  std::vector<double> raw;
  std::vector<double> posterior;
};

// Temperature-1 softmax.
inline std::vector<double> softmax(const std::vector<double>& raw) {
  std::vector<double> p(raw.size());
  if (raw.empty()) return p;
  const double mx = *std::max_element(raw.begin(), raw.end());
  double z = 0;
  for (size_t i = 0; i < raw.size(); ++i) z += (p[i] = std::exp(raw[i] - mx));
  for (auto& v : p) v /= z;
  return p;
}

inline std::vector<double> raw_scores(const LinearModel& m, const Eigen::VectorXd& f) {
  const Eigen::VectorXd s = m.weights * f + m.bias;
  return {s.data(), s.data() + s.size()};
}

inline std::vector<double> raw_scores(const SCModel& m, const Eigen::VectorXd& f) {
  std::vector<double> s;
  s.reserve(m.dictionaries.size());
  for (const auto& dict : m.dictionaries) {
    const SparseCode code = omp(f, dict, std::min(m.sparsity, std::min(dict.m(), dict.k())));
    s.push_back(-(f - reconstruct(code, dict)).squaredNorm());
  }
  return s;
}

inline std::vector<double> raw_scores(const FernsModel& m, const Eigen::VectorXd& f) {
  const Eigen::VectorXf ff = f.cast<float>();
  std::vector<double> s(static_cast<size_t>(m.num_classes()), 0.0);
  for (int fern = 0; fern < m.ferns; ++fern) {
    const double* row = &m.log_probs[(static_cast<size_t>(fern) * m.leaves() + m.leaf_of(fern, ff.data())) * s.size()];
    for (size_t c = 0; c < s.size(); ++c) s[c] += row[c];
  }
  return s;
}

inline ClassScores classify(const CharClassifier& model, const FeatureVector& f) {
  if (static_cast<int>(f.size()) != feature_dim(model)) throw std::invalid_argument("classify: feature dimension mismatch");
  const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size()));
  ClassScores out;
  out.raw = std::visit([&v](const auto& m) { return raw_scores(m, v); }, model);
  out.posterior = softmax(out.raw);
  return out;
}

inline int predict(const CharClassifier& model, const FeatureVector& f) {
  const auto s = classify(model, f);
  return static_cast<int>(std::max_element(s.raw.begin(), s.raw.end()) - s.raw.begin());
}

inline constexpr double kPosteriorFloor = 1e-12;

// log p(w|u) - log p(background|u), posteriors floored so the result is finite.
inline double detection_score(std::span<const double> posterior, int label, int background = kBackground) {
  if (label < 0 || static_cast<size_t>(label) >= posterior.size() || background < 0 ||
      static_cast<size_t>(background) >= posterior.size())
    throw std::invalid_argument("detection_score: label out of range");
  return std::log(std::max(posterior[static_cast<size_t>(label)], kPosteriorFloor)) -
         std::log(std::max(posterior[static_cast<size_t>(background)], kPosteriorFloor));
}

inline double accuracy(const CharClassifier& model, const Dataset& ds) {
  if (ds.size() == 0) return 0;
  size_t ok = 0;
  FeatureVector f(static_cast<size_t>(ds.dim()));
  for (size_t i = 0; i < ds.size(); ++i) {
    for (int j = 0; j < ds.dim(); ++j) f[static_cast<size_t>(j)] = ds.features(static_cast<Eigen::Index>(i), j);
    ok += predict(model, f) == ds.labels[i] ? 1 : 0;
  }
  return static_cast<double>(ok) / static_cast<double>(ds.size());
}

// ---------------------------------------------------------------------------
// Model container: 4-byte type tag ("LIN", "SC", "FERN", NUL padded), u32
// version, label set (u32 count + length-prefixed names), u32 feature dim,
// then the type-specific payload as little-endian doubles.

inline constexpr uint32_t kModelFormatVersion = 1;

inline std::string model_type(const CharClassifier& m) {
  switch (m.index()) {
    case 0: return "LIN";
    case 1: return "SC";
    default: return "FERN";
  }
}

inline void write_model(const CharClassifier& model, std::ostream& os) {
  std::string tag = model_type(model);
  tag.resize(4, '\0');
  os.write(tag.data(), 4);
  io::put_u32(os, kModelFormatVersion);
  const auto& labels = model_labels(model);
  io::put_u32(os, static_cast<uint32_t>(labels.size()));
  for (const auto& l : labels) io::put_string(os, l);
  io::put_u32(os, static_cast<uint32_t>(feature_dim(model)));
  if (const auto* lin = std::get_if<LinearModel>(&model)) {
    for (Eigen::Index r = 0; r < lin->weights.rows(); ++r)
      for (Eigen::Index c = 0; c < lin->weights.cols(); ++c) io::put_f64(os, lin->weights(r, c));
    for (Eigen::Index r = 0; r < lin->bias.size(); ++r) io::put_f64(os, lin->bias[r]);
  } else if (const auto* sc = std::get_if<SCModel>(&model)) {
    io::put_u32(os, static_cast<uint32_t>(sc->sparsity));
    io::put_u32(os, static_cast<uint32_t>(sc->basis()));
    for (const auto& d : sc->dictionaries)
      for (int j = 0; j < d.k(); ++j)
        for (int i = 0; i < d.m(); ++i) io::put_f64(os, d.atoms()(i, j));
  } else {
    const auto& fm = std::get<FernsModel>(model);
    io::put_u32(os, static_cast<uint32_t>(fm.ferns));
    io::put_u32(os, static_cast<uint32_t>(fm.depth));
    for (const auto& t : fm.tests) {
      io::put_u32(os, static_cast<uint32_t>(t.feature));
      io::put_f64(os, t.threshold);
    }
    for (double v : fm.log_probs) io::put_f64(os, v);
  }
}

inline CharClassifier read_model(std::istream& is) {
  char raw_tag[4];
  io::read_exact(is, raw_tag, 4);
  const std::string tag(raw_tag, strnlen(raw_tag, 4));
  if (io::get_u32(is) != kModelFormatVersion) throw DataError("model: unsupported version");
  const uint32_t nlabels = io::get_u32(is);
  if (nlabels == 0 || nlabels > 4096) throw DataError("model: bad label count");
  std::vector<std::string> labels(nlabels);
  for (auto& l : labels) l = io::get_string(is, 256);
  const uint32_t dim = io::get_u32(is);
  if (dim == 0 || dim > (1u << 24)) throw DataError("model: bad feature dimension");
  if (tag == "LIN") {
    LinearModel m;
    m.labels = std::move(labels);
    m.weights.resize(nlabels, dim);
    m.bias.resize(nlabels);
    for (uint32_t r = 0; r < nlabels; ++r)
      for (uint32_t c = 0; c < dim; ++c) m.weights(r, c) = io::get_f64(is);
    for (uint32_t r = 0; r < nlabels; ++r) m.bias[r] = io::get_f64(is);
    return m;
  }
  if (tag == "SC") {
    SCModel m;
    m.labels = std::move(labels);
    m.sparsity = static_cast<int>(io::get_u32(is));
    const uint32_t basis = io::get_u32(is);
    if (basis == 0 || basis > 1u << 16) throw DataError("model: bad basis count");
    for (uint32_t c = 0; c < nlabels; ++c) {
      Eigen::MatrixXd atoms(dim, basis);
      for (uint32_t j = 0; j < basis; ++j)
        for (uint32_t i = 0; i < dim; ++i) atoms(i, j) = io::get_f64(is);
      try {
        m.dictionaries.emplace_back(std::move(atoms), 0);
      } catch (const std::invalid_argument& e) {
        throw DataError(std::string("model: ") + e.what());
      }
    }
    return m;
  }
  if (tag == "FERN") {
    FernsModel m;
    m.labels = std::move(labels);
    m.feature_dim = static_cast<int>(dim);
    m.ferns = static_cast<int>(io::get_u32(is));
    m.depth = static_cast<int>(io::get_u32(is));
    if (m.ferns < 1 || m.ferns > 1 << 16 || m.depth < 1 || m.depth > 20) throw DataError("model: bad fern shape");
    m.tests.resize(static_cast<size_t>(m.ferns * m.depth));
    for (auto& t : m.tests) {
      t.feature = static_cast<int>(io::get_u32(is));
      if (t.feature >= static_cast<int>(dim)) throw DataError("model: fern test index out of range");
      t.threshold = io::get_f64(is);
    }
    m.log_probs.resize(static_cast<size_t>(m.ferns) * m.leaves() * nlabels);
    for (auto& v : m.log_probs) v = io::get_f64(is);
    return m;
  }
  throw DataError("model: unknown type tag '" + tag + "'");
}

inline void save_model(const CharClassifier& model, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open for writing: " + path);
  write_model(model, os);
}

inline CharClassifier load_model(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open: " + path);
  return read_model(is);
}

// Sidecar metadata written next to a model file.
inline nlohmann::json model_metadata(const CharClassifier& model, const nlohmann::json& training_config) {
  return {{"type", model_type(model)},
          {"labels", model_labels(model)},
          {"feature_dim", feature_dim(model)},
          {"training_config", training_config},
          {"config_hash", hex64(fnv1a(training_config.dump()))}};
}

}  // namespace hsc

// Copyright 2026 The HSC Text Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <sstream>

#include "test_util.hpp"

namespace hsc {
namespace {

TEST(Labels, CharacterMapping) {
  EXPECT_EQ(label_of('0'), 0);
  EXPECT_EQ(label_of('A'), 10);
  EXPECT_EQ(label_of('a'), 36);
  EXPECT_EQ(label_of('z'), 61);
  EXPECT_EQ(label_of('-'), -1);
  for (int l = 0; l < kBackground; ++l) EXPECT_EQ(label_of(label_char(l)), l);
  EXPECT_THROW(label_char(kBackground), std::invalid_argument);
  EXPECT_EQ(character_labels().size(), 63u);
  EXPECT_EQ(label_from_name("BACKGROUND"), kBackground);
  EXPECT_EQ(label_from_name("Q"), label_of('Q'));
  EXPECT_EQ(label_from_name("QQ"), -1);
}

double primal_objective(const SvmMatrix& X, std::span<const int> y, const Eigen::VectorXd& w, double b, double C) {
  double hinge = 0;
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    hinge += std::max(0.0, 1 - y[static_cast<size_t>(i)] * (X.row(i).dot(w) + b));
  return 0.5 * (w.squaredNorm() + b * b) + C * hinge / static_cast<double>(X.rows());
}

struct SvmProblem {
  SvmMatrix X;
  std::vector<int> y;
};

SvmProblem overlapping_problem(int n, int d, Rng& rng) {
  SvmProblem p{SvmMatrix(n, d), std::vector<int>(static_cast<size_t>(n))};
  for (int i = 0; i < n; ++i) {
    const int label = uniform01(rng) < 0.4 ? 1 : -1;
    p.y[static_cast<size_t>(i)] = label;
    for (int j = 0; j < d; ++j) p.X(i, j) = standard_normal(rng) + (j == 0 ? 0.8 * label : 0.0);
  }
  return p;
}

TEST(Svm, SymmetricPairHasUnitMargin) {
  SvmMatrix X(2, 1);
  X << 1, -1;
  const std::vector<int> y = {1, -1};
  SvmConfig cfg;
  cfg.C = 1000;
  cfg.tolerance = 1e-9;
  const BinarySvm m = train_binary_svm(X, y, cfg);
  EXPECT_NEAR(m.weights[0], 1.0, 1e-6);
  EXPECT_NEAR(m.bias, 0.0, 1e-6);
}

TEST(Svm, NoRandomPerturbationImprovesPrimal) {
  Rng rng(3);
  const SvmProblem p = overlapping_problem(120, 5, rng);
  SvmConfig cfg;
  cfg.C = 10;
  cfg.tolerance = 1e-8;
  cfg.max_epochs = 5000;
  const BinarySvm m = train_binary_svm(p.X, p.y, cfg);
  const double best = primal_objective(p.X, p.y, m.weights, m.bias, cfg.C);
  for (int t = 0; t < 500; ++t) {
    Eigen::VectorXd dw(5);
    for (int j = 0; j < 5; ++j) dw[j] = 1e-3 * standard_normal(rng);
    const double db = 1e-3 * standard_normal(rng);
    EXPECT_GE(primal_objective(p.X, p.y, m.weights + dw, m.bias + db, cfg.C), best - 1e-7);
  }
}

TEST(Svm, DuplicatingTheDataLeavesTheSolution) {
  Rng rng(5);
  const SvmProblem p = overlapping_problem(80, 4, rng);
  SvmProblem dup{SvmMatrix(160, 4), {}};
  dup.X << p.X, p.X;
  dup.y = p.y;
  dup.y.insert(dup.y.end(), p.y.begin(), p.y.end());
  SvmConfig cfg;
  cfg.C = 5;
  cfg.tolerance = 1e-9;
  cfg.max_epochs = 10000;
  const BinarySvm a = train_binary_svm(p.X, p.y, cfg);
  const BinarySvm b = train_binary_svm(dup.X, dup.y, cfg);
  EXPECT_LE((a.weights - b.weights).norm(), 1e-4);
  EXPECT_NEAR(a.bias, b.bias, 1e-4);
}

TEST(Svm, FloatOverloadAgrees) {
  Rng rng(6);
  const SvmProblem p = overlapping_problem(50, 3, rng);
  const FeatureMatrix Xf = p.X.cast<float>();
  const SvmMatrix Xd = Xf.cast<double>();
  const BinarySvm a = train_binary_svm(Xf, p.y, {});
  const BinarySvm b = train_binary_svm(Xd, p.y, {});
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.bias, b.bias);
}

TEST(Svm, RejectsBadInput) {
  SvmMatrix X(2, 1);
  X << 1, 2;
  const std::vector<int> y = {1};
  EXPECT_THROW(train_binary_svm(X, y, {}), std::invalid_argument);
  SvmConfig cfg;
  cfg.C = 0;
  const std::vector<int> y2 = {1, -1};
  EXPECT_THROW(train_binary_svm(X, y2, cfg), std::invalid_argument);
}

TEST(Calibration, SoftmaxAndDetectionScore) {
  const auto p = softmax({1000.0, 1000.0 + std::log(3.0)});
  EXPECT_NEAR(p[0], 0.25, 1e-12);
  EXPECT_NEAR(p[1], 0.75, 1e-12);
  const std::vector<double> post = {0.2, 0.0, 0.8};
  EXPECT_NEAR(detection_score(post, 0, 2), std::log(0.25), 1e-12);
  EXPECT_NEAR(detection_score(post, 1, 2), std::log(1e-12) - std::log(0.8), 1e-9);
  EXPECT_THROW(detection_score(post, 3, 2), std::invalid_argument);
}

// 63 well-separated Gaussian classes.
struct Clusters {
  Dataset train, test;
};

Clusters clusters(int train_per_class, int test_per_class, int d, uint64_t seed) {
  Rng rng(seed);
  std::vector<Eigen::VectorXd> means;
  for (int c = 0; c < kNumLabels; ++c) {
    Eigen::VectorXd m(d);
    for (int j = 0; j < d; ++j) m[j] = 4 * standard_normal(rng);
    means.push_back(m);
  }
  auto draw = [&](int per) {
    std::vector<FeatureVector> rows;
    std::vector<int> labels;
    for (int c = 0; c < kNumLabels; ++c)
      for (int s = 0; s < per; ++s) {
        FeatureVector f(static_cast<size_t>(d));
        for (int j = 0; j < d; ++j) f[static_cast<size_t>(j)] = means[static_cast<size_t>(c)][j] + 0.3 * standard_normal(rng);
        rows.push_back(f);
        labels.push_back(c);
      }
    return make_dataset(rows, labels);
  };
  Clusters out;
  out.train = draw(train_per_class);
  out.test = draw(test_per_class);
  return out;
}

TEST(Dataset, Validation) {
  EXPECT_THROW(make_dataset({{1.0}}, {0, 1}), std::invalid_argument);
  EXPECT_THROW(make_dataset({{1.0}, {1.0, 2.0}}, {0, 1}), std::invalid_argument);
  EXPECT_THROW(make_dataset({{1.0}}, {63}), std::invalid_argument);
  const Dataset one = make_dataset({{1.0}}, {0});
  EXPECT_THROW(train_linear(one, {}), std::invalid_argument);
}

TEST(Linear, SeparatesClusters) {
  const Clusters c = clusters(6, 4, 12, 1);
  const LinearModel m = train_linear(c.train, {});
  EXPECT_EQ(m.weights.rows(), 63);
  EXPECT_GE(accuracy(m, c.test), 0.98);
}

TEST(Linear, ThreadCountDoesNotChangeTheModel) {
  const Clusters c = clusters(3, 1, 6, 2);
  SvmConfig cfg;
  const LinearModel a = train_linear(c.train, cfg);
  cfg.threads = 4;
  const LinearModel b = train_linear(c.train, cfg);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.bias, b.bias);
}

TEST(SparseCodingClassifier, TwoClassSubspaces) {
  // Class a lives on the x axis, class b on the y axis.
  std::vector<FeatureVector> rows;
  std::vector<int> labels;
  for (int i = 1; i <= 4; ++i) {
    rows.push_back({double(i), 0.01 * i});
    labels.push_back(0);
    rows.push_back({-0.01 * i, double(i)});
    labels.push_back(1);
  }
  const Dataset ds = make_dataset(rows, labels, {"a", "b"});
  SCConfig cfg;
  cfg.basis = 1;
  cfg.sparsity = 1;
  const SCModel m = train_sc(ds, cfg);
  ASSERT_EQ(m.dictionaries.size(), 2u);
  EXPECT_NEAR(std::abs(m.dictionaries[0].atoms()(0, 0)), 1.0, 1e-3);
  EXPECT_EQ(predict(m, {3.0, 0.5}), 0);
  EXPECT_EQ(predict(m, {0.5, 3.0}), 1);
  // Raw score is minus the squared residual to the class subspace.
  const auto s = classify(m, {0.0, 2.0});
  EXPECT_NEAR(s.raw[0], -4.0, 1e-3);
  EXPECT_NEAR(s.raw[1], 0.0, 1e-3);
}

TEST(SparseCodingClassifier, SeparatesClusters) {
  const Clusters c = clusters(6, 3, 12, 3);
  SCConfig cfg;
  cfg.basis = 3;
  cfg.sparsity = 2;
  EXPECT_GE(accuracy(train_sc(c.train, cfg), c.test), 0.95);
  cfg.basis = 7;
  EXPECT_THROW(train_sc(c.train, cfg), std::invalid_argument);
}

TEST(Ferns, HandComputedTables) {
  const Dataset ds = make_dataset({{0.0}, {0.0}, {1.0}, {1.0}}, {0, 0, 0, 1}, {"a", "b"});
  FernsModel m;
  m.labels = {"a", "b"};
  m.feature_dim = 1;
  m.ferns = 1;
  m.depth = 1;
  m.tests = {{0, 0.5}};
  fit_fern_tables(m, ds);
  // Laplace smoothing over two leaves: (count + 1) / (class total + 2).
  EXPECT_NEAR(m.log_probs[0], std::log(3.0 / 5.0), 1e-12);  // leaf 0, a
  EXPECT_NEAR(m.log_probs[1], std::log(1.0 / 3.0), 1e-12);  // leaf 0, b
  EXPECT_NEAR(m.log_probs[2], std::log(2.0 / 5.0), 1e-12);  // leaf 1, a
  EXPECT_NEAR(m.log_probs[3], std::log(2.0 / 3.0), 1e-12);  // leaf 1, b
  EXPECT_EQ(predict(m, {0.0}), 0);
  EXPECT_EQ(predict(m, {1.0}), 1);
}

TEST(Ferns, SeparatesClusters) {
  const Clusters c = clusters(10, 3, 8, 4);
  FernsConfig cfg;
  cfg.ferns = 60;
  cfg.depth = 6;
  EXPECT_GE(accuracy(train_ferns(c.train, cfg), c.test), 0.8);
}

std::string serialize(const CharClassifier& m) {
  std::ostringstream os;
  write_model(m, os);
  return os.str();
}

TEST(ModelFile, RoundTripsEveryType) {
  const Clusters c = clusters(4, 2, 5, 5);
  SCConfig sc;
  sc.basis = 2;
  sc.sparsity = 1;
  FernsConfig fc;
  fc.ferns = 5;
  fc.depth = 3;
  const std::vector<CharClassifier> models = {train_linear(c.train, {}), train_sc(c.train, sc),
                                              train_ferns(c.train, fc)};
  for (const auto& m : models) {
    const std::string bytes = serialize(m);
    std::istringstream is(bytes);
    const CharClassifier back = read_model(is);
    EXPECT_EQ(back.index(), m.index());
    EXPECT_EQ(serialize(back), bytes);
    for (size_t i = 0; i < c.test.size(); ++i) {
      FeatureVector f(5);
      for (int j = 0; j < 5; ++j) f[static_cast<size_t>(j)] = c.test.features(static_cast<Eigen::Index>(i), j);
      EXPECT_EQ(classify(back, f).raw, classify(m, f).raw);
    }
  }
}

TEST(ModelFile, RejectsCorruption) {
  const Clusters c = clusters(1, 1, 3, 6);
  const std::string bytes = serialize(train_linear(c.train, {}));
  std::string tag = bytes;
  tag[0] = 'Z';
  std::istringstream a(tag);
  EXPECT_THROW(read_model(a), DataError);
  std::istringstream b(bytes.substr(0, bytes.size() / 2));
  EXPECT_THROW(read_model(b), DataError);
  std::string version = bytes;
  version[4] = 9;
  std::istringstream d(version);
  EXPECT_THROW(read_model(d), DataError);
}

TEST(ModelFile, MetadataHashTracksConfig) {
  const Clusters c = clusters(1, 1, 3, 7);
  const CharClassifier m = train_linear(c.train, {});
  const auto a = model_metadata(m, {{"C", 1000}});
  const auto b = model_metadata(m, {{"C", 10}});
  EXPECT_EQ(a["type"], "LIN");
  EXPECT_EQ(a["feature_dim"], 3);
  EXPECT_NE(a["config_hash"], b["config_hash"]);
}

}  // namespace
}  // namespace hsc

// Copyright 2026 The HSC Text Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <Eigen/SVD>
#include <sstream>

#include "test_util.hpp"

namespace hsc {
namespace {

using testing::random_dictionary;
using testing::random_orthonormal;

Eigen::VectorXd random_vector(int n, Rng& rng) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = standard_normal(rng);
  return v;
}

TEST(Dictionary, RejectsBadAtoms) {
  EXPECT_THROW(Dictionary(Eigen::MatrixXd::Ones(4, 2), 2), std::invalid_argument);
  EXPECT_THROW(Dictionary::from_columns(Eigen::MatrixXd::Zero(4, 2), 2), std::invalid_argument);
  EXPECT_THROW(Dictionary::from_columns(Eigen::MatrixXd::Ones(5, 2), 2), std::invalid_argument);
  const Dictionary d = Dictionary::from_columns(Eigen::MatrixXd::Ones(4, 3), 2);
  EXPECT_NEAR(d.atoms().col(2).norm(), 1.0, 1e-15);
}

TEST(Omp, RecoversSparseCombinationOfOrthonormalAtoms) {
  Rng rng(5);
  const Dictionary d(random_orthonormal(12, rng), 0);
  for (int t = 0; t < 50; ++t) {
    std::vector<int> support = {static_cast<int>(uniform_index(rng, 12))};
    while (support.size() < 3) {
      const int j = static_cast<int>(uniform_index(rng, 12));
      if (std::find(support.begin(), support.end(), j) == support.end()) support.push_back(j);
    }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(12);
    for (int j : support) x += uniform_real(rng, 0.5, 2.0) * (uniform01(rng) < 0.5 ? -1 : 1) * d.atoms().col(j);
    const SparseCode code = omp(x, d, 3);
    EXPECT_LE((x - reconstruct(code, d)).norm(), 1e-10);
    for (const auto& e : code.entries)
      EXPECT_NE(std::find(support.begin(), support.end(), e.index), support.end());
  }
}

TEST(Omp, ResidualOrthogonalToSelectedAtoms) {
  Rng rng(9);
  const Dictionary d = random_dictionary(5, 40, rng);
  for (int t = 0; t < 40; ++t) {
    const Eigen::VectorXd x = random_vector(25, rng);
    const SparseCode code = omp(x, d, 4);
    const Eigen::VectorXd r = x - reconstruct(code, d);
    for (const auto& e : code.entries) EXPECT_NEAR(d.atoms().col(e.index).dot(r), 0.0, 1e-10);
  }
}

TEST(Omp, ResidualNormsNonIncreasing) {
  Rng rng(13);
  const Dictionary d = random_dictionary(4, 30, rng);
  std::vector<double> norms;
  omp(random_vector(16, rng), d, 8, 0.0, &norms);
  ASSERT_EQ(norms.size(), 9u);
  for (size_t i = 1; i < norms.size(); ++i) EXPECT_LE(norms[i], norms[i - 1] + 1e-12);
}

TEST(Omp, FirstSelectionIsMostCorrelatedAtom) {
  Rng rng(17);
  const Dictionary d = random_dictionary(4, 30, rng);
  for (int t = 0; t < 30; ++t) {
    const Eigen::VectorXd x = random_vector(16, rng);
    Eigen::Index best = 0;
    (d.atoms().transpose() * x).cwiseAbs().maxCoeff(&best);
    EXPECT_EQ(omp(x, d, 1).entries.at(0).index, best);
  }
}

TEST(Omp, TiesGoToSmallestIndex) {
  const Dictionary d(Eigen::MatrixXd::Identity(4, 4), 2);
  const Eigen::Vector4d x(0, 1, -1, 0.5);
  const SparseCode code = omp(x, d, 1);
  ASSERT_EQ(code.entries.size(), 1u);
  EXPECT_EQ(code.entries[0].index, 1);
  EXPECT_EQ(omp_gram(x, x.squaredNorm(), d, 1).entries.at(0).index, 1);
}

TEST(Omp, ZeroInputGivesEmptyCode) {
  Rng rng(1);
  const Dictionary d = random_dictionary(3, 10, rng);
  EXPECT_TRUE(omp(Eigen::VectorXd::Zero(9), d, 2).empty());
  EXPECT_TRUE(omp_gram(Eigen::VectorXd::Zero(10), 0.0, d, 2).empty());
}

TEST(Omp, BudgetValidated) {
  Rng rng(1);
  const Dictionary d = random_dictionary(3, 10, rng);
  EXPECT_THROW(omp(Eigen::VectorXd::Ones(9), d, 0), std::invalid_argument);
  EXPECT_THROW(omp(Eigen::VectorXd::Ones(9), d, 10), std::invalid_argument);
  EXPECT_THROW(omp(Eigen::VectorXd::Ones(8), d, 2), std::invalid_argument);
}

TEST(Omp, GramVariantAgrees) {
  Rng rng(21);
  const Dictionary d = random_dictionary(5, 60, rng);
  for (int t = 0; t < 100; ++t) {
    const Eigen::VectorXd x = random_vector(25, rng);
    const SparseCode a = omp(x, d, 3);
    const SparseCode b = omp_gram(d.atoms().transpose() * x, x.squaredNorm(), d, 3);
    ASSERT_EQ(a.entries.size(), b.entries.size());
    for (size_t i = 0; i < a.entries.size(); ++i) {
      EXPECT_EQ(a.entries[i].index, b.entries[i].index);
      EXPECT_NEAR(a.entries[i].value, b.entries[i].value, 1e-9);
    }
  }
}

// Residual of the users of atom j with j's contribution removed.
Eigen::MatrixXd restricted_residual(const Eigen::MatrixXd& X, const Dictionary& d, const std::vector<SparseCode>& codes,
                                    int j, std::vector<size_t>& users) {
  users.clear();
  for (size_t i = 0; i < codes.size(); ++i)
    if (codes[i].uses(j)) users.push_back(i);
  Eigen::MatrixXd E(X.rows(), static_cast<Eigen::Index>(users.size()));
  for (size_t c = 0; c < users.size(); ++c) {
    Eigen::VectorXd e = X.col(static_cast<Eigen::Index>(users[c]));
    for (const auto& entry : codes[users[c]].entries)
      if (entry.index != j) e -= entry.value * d.atoms().col(entry.index);
    E.col(static_cast<Eigen::Index>(c)) = e;
  }
  return E;
}

TEST(Ksvd, AtomUpdateMatchesSvdOracle) {
  Rng rng(31);
  for (const int n : {10, 200}) {  // both Gram branches
    const Dictionary d = random_dictionary(4, 20, rng);
    Eigen::MatrixXd X(16, n);
    for (int i = 0; i < n; ++i) X.col(i) = random_vector(16, rng);
    std::vector<SparseCode> codes;
    for (int i = 0; i < n; ++i) codes.push_back(omp(X.col(i), d, 3));
    for (int j = 0; j < d.k(); ++j) {
      std::vector<size_t> users;
      const Eigen::MatrixXd E = restricted_residual(X, d, codes, j, users);
      const AtomUpdate up = ksvd_update_atom(d, codes, X, j);
      if (users.empty()) {
        EXPECT_TRUE(up.reseeded);
        continue;
      }
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(E, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const Eigen::MatrixXd best = svd.singularValues()[0] * svd.matrixU().col(0) * svd.matrixV().col(0).transpose();
      Eigen::VectorXd coeffs(static_cast<Eigen::Index>(users.size()));
      for (size_t c = 0; c < users.size(); ++c) {
        EXPECT_EQ(up.coefficients[c].first, users[c]);
        coeffs[static_cast<Eigen::Index>(c)] = up.coefficients[c].second;
      }
      EXPECT_NEAR(up.atom.norm(), 1.0, 1e-12);
      EXPECT_NEAR(std::abs(up.atom.dot(svd.matrixU().col(0))), 1.0, 1e-8);
      EXPECT_LE((up.atom * coeffs.transpose() - best).norm(), 1e-8 * (1 + best.norm()));
      Eigen::Index arg = 0;
      up.atom.cwiseAbs().maxCoeff(&arg);
      EXPECT_GT(up.atom[arg], 0.0);
    }
  }
}

TEST(Ksvd, MseTraceMonotone) {
  Rng rng(41);
  Eigen::MatrixXd X(16, 300);
  for (int i = 0; i < 300; ++i) X.col(i) = random_vector(16, rng);
  KsvdOptions opt;
  opt.atoms = 24;
  opt.sparsity = 3;
  opt.iterations = 15;
  opt.seed = 2;
  const KsvdResult res = ksvd_learn_traced(X, opt);
  ASSERT_EQ(res.mse_trace.size(), 16u);
  for (size_t t = 1; t < res.mse_trace.size(); ++t) EXPECT_LE(res.mse_trace[t], res.mse_trace[t - 1] + 1e-9);
  EXPECT_NEAR(res.mse_trace.back(), reconstruction_mse(X, res.dictionary, res.codes), 1e-12);
  for (const auto& c : res.codes) EXPECT_LE(c.entries.size(), 3u);
}

TEST(Ksvd, DeterministicAndThreadIndependent) {
  Rng rng(43);
  Eigen::MatrixXd X(9, 2500);
  for (int i = 0; i < X.cols(); ++i) X.col(i) = random_vector(9, rng);
  KsvdOptions opt;
  opt.atoms = 12;
  opt.sparsity = 2;
  opt.iterations = 4;
  opt.patch_side = 3;
  const auto a = ksvd_learn_traced(X, opt);
  opt.threads = 4;
  const auto b = ksvd_learn_traced(X, opt);
  EXPECT_EQ(a.dictionary, b.dictionary);
  EXPECT_EQ(a.mse_trace, b.mse_trace);
}

TEST(Ksvd, UnusedAtomReseededWithWorstSample) {
  // Atom 1 duplicates atom 0, so OMP never picks it.
  Eigen::MatrixXd atoms = Eigen::MatrixXd::Zero(3, 2);
  atoms(0, 0) = atoms(0, 1) = 1;
  const Dictionary d(atoms, 0);
  Eigen::MatrixXd X(3, 3);
  X << 1, 0, 2,  //
      0, 3, 0,   //
      0, 1, 0;
  std::vector<SparseCode> codes;
  for (int i = 0; i < 3; ++i) codes.push_back(omp(X.col(i), d, 1));
  const AtomUpdate up = ksvd_update_atom(d, codes, X, 1);
  EXPECT_TRUE(up.reseeded);
  EXPECT_LE((up.atom - Eigen::Vector3d(0, 3, 1).normalized()).norm(), 1e-12);
}

TEST(Ksvd, InputValidation) {
  EXPECT_THROW(ksvd_learn(Eigen::MatrixXd::Zero(4, 10), 3, 1, 2, 1), std::invalid_argument);
  EXPECT_THROW(ksvd_learn(Eigen::MatrixXd::Ones(4, 2), 3, 1, 2, 1), std::invalid_argument);
  EXPECT_THROW(ksvd_learn(Eigen::MatrixXd::Ones(4, 10), 3, 5, 2, 1), std::invalid_argument);
}

TEST(Patches, MeanZeroAndDeterministic) {
  Rng rng(3);
  std::vector<Image> corpus = {testing::blob_image(30, 20, rng), testing::blob_image(25, 25, rng)};
  const Eigen::MatrixXd a = sample_patches(corpus, 50, 7, 11);
  const Eigen::MatrixXd b = sample_patches(corpus, 50, 7, 11);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rows(), 49);
  EXPECT_EQ(a.cols(), 100);
  for (Eigen::Index i = 0; i < a.cols(); ++i) EXPECT_NEAR(a.col(i).mean(), 0.0, 1e-12);
}

TEST(Patches, FlatImagesYieldNothing) {
  const Eigen::MatrixXd X = sample_patches({Image(20, 20, 0.5)}, 10, 5, 1);
  EXPECT_EQ(X.cols(), 0);
  EXPECT_THROW(sample_patches({Image(4, 4)}, 1, 5, 1), std::invalid_argument);
}

TEST(DictionaryFile, RoundTripAndCorruption) {
  Rng rng(2);
  const Dictionary d = random_dictionary(3, 7, rng);
  std::stringstream ss;
  write_dictionary(d, ss);
  const std::string bytes = ss.str();
  EXPECT_EQ(bytes.size(), 4 + 16 + 8u * 9 * 7);
  EXPECT_EQ(read_dictionary(ss), d);

  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  std::stringstream s1(bad_magic);
  EXPECT_THROW(read_dictionary(s1), DataError);
  std::stringstream s2(bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(read_dictionary(s2), DataError);
  std::string scaled = bytes;
  scaled[20 + 7] ^= 0x10;  // perturb the exponent of the first value
  std::stringstream s3(scaled);
  EXPECT_THROW(read_dictionary(s3), DataError);
}

TEST(DictionaryFile, JsonMirrorsBinary) {
  Rng rng(4);
  const Dictionary d = random_dictionary(3, 5, rng);
  const auto j = dictionary_to_json(d);
  EXPECT_EQ(j["k"], 5);
  EXPECT_EQ(j["m"], 9);
  EXPECT_EQ(j["atoms"][4][8].get<double>(), d.atoms()(8, 4));
}

}  // namespace
}  // namespace hsc

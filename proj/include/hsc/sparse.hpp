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

// Sparse coding over a learned dictionary: orthogonal matching pursuit and
// K-SVD dictionary learning on image patches.

#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include "hsc/common.hpp"

namespace hsc {

// Column i of atoms() is atom i. Every column has unit L2 norm.
// patch_side == 0 marks a dictionary over a non-image feature space.
class Dictionary {
 public:
  static constexpr double kNormTolerance = 1e-9;

  Dictionary() = default;
  Dictionary(Eigen::MatrixXd atoms, int patch_side) : atoms_(std::move(atoms)), patch_side_(patch_side) {
    if (atoms_.cols() < 1 || atoms_.rows() < 1) throw std::invalid_argument("Dictionary: need k >= 1 atoms of dim >= 1");
    if (patch_side_ < 0) throw std::invalid_argument("Dictionary: negative patch side");
    if (patch_side_ > 0 && atoms_.rows() != static_cast<Eigen::Index>(patch_side_) * patch_side_)
      throw std::invalid_argument("Dictionary: m must equal patch_side^2");
    if (!atoms_.allFinite()) throw std::invalid_argument("Dictionary: non-finite atom values");
    for (Eigen::Index j = 0; j < atoms_.cols(); ++j)
      if (std::abs(atoms_.col(j).norm() - 1.0) > kNormTolerance)
        throw std::invalid_argument("Dictionary: atom " + std::to_string(j) + " is not unit norm");
    gram_ = atoms_.transpose() * atoms_;
  }

  // Normalizes every column first; zero columns are rejected.
  static Dictionary from_columns(Eigen::MatrixXd columns, int patch_side) {
    for (Eigen::Index j = 0; j < columns.cols(); ++j) {
      const double n = columns.col(j).norm();
      if (!(n > 0)) throw std::invalid_argument("Dictionary: zero column");
      columns.col(j) /= n;
    }
    return Dictionary(std::move(columns), patch_side);
  }

  const Eigen::MatrixXd& atoms() const { return atoms_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  int m() const { return static_cast<int>(atoms_.rows()); }
  int k() const { return static_cast<int>(atoms_.cols()); }
  int patch_side() const { return patch_side_; }

  friend bool operator==(const Dictionary& a, const Dictionary& b) {
    return a.patch_side_ == b.patch_side_ && a.atoms_.rows() == b.atoms_.rows() &&
           a.atoms_.cols() == b.atoms_.cols() && a.atoms_ == b.atoms_;
  }

 private:
  Eigen::MatrixXd atoms_;
  Eigen::MatrixXd gram_;
  int patch_side_ = 0;
};

struct SparseCode {
  struct Entry {
    int index = 0;
    double value = 0;
    friend bool operator==(const Entry&, const Entry&) = default;
  };
  std::vector<Entry> entries;  // selection order
  int sparsity_budget = 0;

  bool empty() const { return entries.empty(); }
  bool uses(int atom) const {
    return std::any_of(entries.begin(), entries.end(), [atom](const Entry& e) { return e.index == atom; });
  }
};

inline Eigen::VectorXd reconstruct(const SparseCode& code, const Dictionary& dict) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dict.m());
  for (const auto& e : code.entries) out += e.value * dict.atoms().col(e.index);
  return out;
}

namespace detail {

inline void check_budget(int budget, const Dictionary& dict) {
  if (budget < 1 || budget > std::min(dict.m(), dict.k()))
    throw std::invalid_argument("omp: sparsity budget must be in [1, min(m, k)]");
}

inline void canonicalize_sign(Eigen::Ref<Eigen::VectorXd> v, double* coeff_scale = nullptr) {
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v[arg] < 0) {
    v = -v;
    if (coeff_scale) *coeff_scale = -*coeff_scale;
  }
}

inline int argmax_unselected(const Eigen::VectorXd& corr, const std::vector<int>& selected) {
  int best = -1;
  double best_abs = -1;
  for (Eigen::Index j = 0; j < corr.size(); ++j) {
    const double a = std::abs(corr[j]);
    if (a > best_abs && std::find(selected.begin(), selected.end(), j) == selected.end()) {
      best_abs = a;
      best = static_cast<int>(j);
    }
  }
  return best;
}

}  // namespace detail

// Greedy selection of the atom most correlated with the residual, followed by
// a least-squares refit over the whole selected set. A negative residual_tol
// selects the default 1e-6 * ||x||. When residual_norms is given it receives
// ||r|| before the first and after every iteration.
inline SparseCode omp(const Eigen::Ref<const Eigen::VectorXd>& x, const Dictionary& dict, int budget,
                      double residual_tol = -1, std::vector<double>* residual_norms = nullptr) {
  if (x.size() != dict.m()) throw std::invalid_argument("omp: dimension mismatch");
  if (!x.allFinite()) throw std::invalid_argument("omp: non-finite input");
  detail::check_budget(budget, dict);

  SparseCode code;
  code.sparsity_budget = budget;
  const double xnorm = x.norm();
  const double tol = residual_tol < 0 ? 1e-6 * xnorm : residual_tol;
  if (residual_norms) residual_norms->assign(1, xnorm);
  if (xnorm == 0) return code;

  const auto& D = dict.atoms();
  std::vector<int> selected;
  Eigen::VectorXd coeffs;
  Eigen::VectorXd residual = x;
  double rnorm = xnorm;
  while (static_cast<int>(selected.size()) < budget && rnorm > tol) {
    const Eigen::VectorXd corr = D.transpose() * residual;
    const int j = detail::argmax_unselected(corr, selected);
    if (j < 0 || std::abs(corr[j]) <= 1e-14 * xnorm) break;
    selected.push_back(j);
    Eigen::MatrixXd sub(D.rows(), static_cast<Eigen::Index>(selected.size()));
    for (size_t s = 0; s < selected.size(); ++s) sub.col(static_cast<Eigen::Index>(s)) = D.col(selected[s]);
    coeffs = sub.householderQr().solve(x);
    residual = x - sub * coeffs;
    rnorm = residual.norm();
    if (residual_norms) residual_norms->push_back(rnorm);
  }
  for (size_t s = 0; s < selected.size(); ++s)
    if (coeffs[static_cast<Eigen::Index>(s)] != 0.0)
      code.entries.push_back({selected[s], coeffs[static_cast<Eigen::Index>(s)]});
  return code;
}

// OMP driven by precomputed correlations D^T x and the Gram matrix D^T D, so
// coding many signals costs one matrix product plus tiny per-signal solves.
// Selects the same atoms as omp() up to floating-point rounding.
inline SparseCode omp_gram(const Eigen::Ref<const Eigen::VectorXd>& dtx, double x_norm_sq, const Dictionary& dict,
                           int budget, double residual_tol = -1) {
  if (dtx.size() != dict.k()) throw std::invalid_argument("omp_gram: correlation vector has wrong size");
  detail::check_budget(budget, dict);
  SparseCode code;
  code.sparsity_budget = budget;
  if (!(x_norm_sq > 0)) return code;
  const double xnorm = std::sqrt(x_norm_sq);
  const double tol = residual_tol < 0 ? 1e-6 * xnorm : residual_tol;
  const auto& G = dict.gram();

  std::vector<int> selected;
  Eigen::VectorXd coeffs;
  Eigen::VectorXd corr = dtx;
  double rnorm = xnorm;
  while (static_cast<int>(selected.size()) < budget && rnorm > tol) {
    const int j = detail::argmax_unselected(corr, selected);
    if (j < 0 || std::abs(corr[j]) <= 1e-14 * xnorm) break;
    selected.push_back(j);
    const auto s = static_cast<Eigen::Index>(selected.size());
    Eigen::MatrixXd gss(s, s);
    Eigen::VectorXd rhs(s);
    for (Eigen::Index a = 0; a < s; ++a) {
      rhs[a] = dtx[selected[a]];
      for (Eigen::Index b = 0; b < s; ++b) gss(a, b) = G(selected[a], selected[b]);
    }
    coeffs = gss.ldlt().solve(rhs);
    corr = dtx;
    for (Eigen::Index a = 0; a < s; ++a) corr -= coeffs[a] * G.col(selected[a]);
    rnorm = std::sqrt(std::max(0.0, x_norm_sq - coeffs.dot(rhs)));
  }
  for (size_t s = 0; s < selected.size(); ++s)
    if (coeffs[static_cast<Eigen::Index>(s)] != 0.0)
      code.entries.push_back({selected[s], coeffs[static_cast<Eigen::Index>(s)]});
  return code;
}

// Squared reconstruction error of every column of X under its code.
inline Eigen::VectorXd reconstruction_errors(const Eigen::MatrixXd& X, const Dictionary& dict,
                                             const std::vector<SparseCode>& codes) {
  Eigen::VectorXd err(X.cols());
  for (Eigen::Index i = 0; i < X.cols(); ++i)
    err[i] = (X.col(i) - reconstruct(codes[static_cast<size_t>(i)], dict)).squaredNorm();
  return err;
}

inline double reconstruction_mse(const Eigen::MatrixXd& X, const Dictionary& dict, const std::vector<SparseCode>& codes) {
  return reconstruction_errors(X, dict, codes).sum() / static_cast<double>(X.rows() * X.cols());
}

// ---------------------------------------------------------------------------
// K-SVD

struct AtomUpdate {
  Eigen::VectorXd atom;
  // (sample index, new coefficient of atom j) for every sample that used j.
  std::vector<std::pair<size_t, double>> coefficients;
  bool reseeded = false;
};

namespace detail {

inline AtomUpdate rank_one_update(const Eigen::MatrixXd& atoms, const std::vector<SparseCode>& codes,
                                  const Eigen::MatrixXd& X, int j, const std::vector<size_t>& users) {
  const Eigen::Index m = atoms.rows();
  const auto count = static_cast<Eigen::Index>(users.size());
  Eigen::MatrixXd E(m, count);
  for (Eigen::Index c = 0; c < count; ++c) {
    const size_t i = users[static_cast<size_t>(c)];
    Eigen::VectorXd e = X.col(static_cast<Eigen::Index>(i));
    for (const auto& entry : codes[i].entries)
      if (entry.index != j) e -= entry.value * atoms.col(entry.index);
    E.col(c) = e;
  }

  // Leading singular pair from the eigendecomposition of the smaller Gram.
  Eigen::VectorXd u, sv;
  if (m <= count) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(E * E.transpose());
    u = eig.eigenvectors().col(m - 1);
    sv = E.transpose() * u;
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(E.transpose() * E);
    const Eigen::VectorXd v = eig.eigenvectors().col(count - 1);
    u = E * v;
    const double sigma = u.norm();
    if (sigma > 0) u /= sigma;
    sv = E.transpose() * u;
  }

  AtomUpdate out;
  if (!(sv.norm() > 0) || !u.allFinite() || std::abs(u.norm() - 1.0) > 1e-6) {
    // Residual is already zero: keep the atom and drop its coefficients.
    out.atom = atoms.col(j);
    for (size_t c = 0; c < users.size(); ++c) out.coefficients.emplace_back(users[c], 0.0);
    return out;
  }
  u.normalize();
  sv = E.transpose() * u;
  double flip = 1.0;
  canonicalize_sign(u, &flip);
  out.atom = u;
  for (size_t c = 0; c < users.size(); ++c) out.coefficients.emplace_back(users[c], flip * sv[static_cast<Eigen::Index>(c)]);
  return out;
}

inline AtomUpdate reseed_atom(const Eigen::MatrixXd& atoms, const std::vector<SparseCode>& codes,
                              const Eigen::MatrixXd& X) {
  AtomUpdate out;
  out.reseeded = true;
  double worst = -1;
  Eigen::Index worst_i = -1;
  for (Eigen::Index i = 0; i < X.cols(); ++i) {
    if (!(X.col(i).squaredNorm() > 0)) continue;
    Eigen::VectorXd r = X.col(i);
    for (const auto& e : codes[static_cast<size_t>(i)].entries) r -= e.value * atoms.col(e.index);
    const double err = r.squaredNorm();
    if (err > worst) {
      worst = err;
      worst_i = i;
    }
  }
  if (worst_i < 0) throw std::invalid_argument("ksvd: all samples are zero");
  out.atom = X.col(worst_i).normalized();
  canonicalize_sign(out.atom);
  return out;
}

}  // namespace detail

// Rank-1 refit of atom j restricted to the samples whose codes use it. An
// atom no sample uses is re-seeded with the worst-reconstructed sample.
inline AtomUpdate ksvd_update_atom(const Dictionary& dict, const std::vector<SparseCode>& codes,
                                   const Eigen::MatrixXd& X, int j) {
  if (X.rows() != dict.m() || static_cast<size_t>(X.cols()) != codes.size())
    throw std::invalid_argument("ksvd_update_atom: shape mismatch");
  if (j < 0 || j >= dict.k()) throw std::invalid_argument("ksvd_update_atom: atom index out of range");
  std::vector<size_t> users;
  for (size_t i = 0; i < codes.size(); ++i)
    for (const auto& e : codes[i].entries)
      if (e.index == j && e.value != 0.0) users.push_back(i);
  if (users.empty()) return detail::reseed_atom(dict.atoms(), codes, X);
  return detail::rank_one_update(dict.atoms(), codes, X, j, users);
}

struct KsvdOptions {
  int atoms = 100;
  int sparsity = 2;
  int iterations = 50;
  uint64_t seed = 0;
  int threads = 1;
  int patch_side = 0;
};

struct KsvdResult {
  Dictionary dictionary;
  std::vector<SparseCode> codes;
  // mse_trace[0] is the MSE of the initial coding; entry t follows iteration t.
  std::vector<double> mse_trace;
  int reseeded_atoms = 0;
};

namespace detail {

inline std::vector<SparseCode> code_all(const Eigen::MatrixXd& X, const Dictionary& dict, int budget, int threads) {
  std::vector<SparseCode> codes(static_cast<size_t>(X.cols()));
  const Eigen::Index block = 1024;
  const auto blocks = static_cast<size_t>((X.cols() + block - 1) / block);
  parallel_for(blocks, threads, [&](size_t b) {
    const Eigen::Index start = static_cast<Eigen::Index>(b) * block;
    const Eigen::Index len = std::min(block, X.cols() - start);
    const Eigen::MatrixXd corr = dict.atoms().transpose() * X.middleCols(start, len);
    for (Eigen::Index c = 0; c < len; ++c)
      codes[static_cast<size_t>(start + c)] =
          omp_gram(corr.col(c), X.col(start + c).squaredNorm(), dict, budget);
  });
  return codes;
}

}  // namespace detail

inline KsvdResult ksvd_learn_traced(const Eigen::MatrixXd& X, const KsvdOptions& opt) {
  const Eigen::Index n = X.cols();
  if (opt.atoms < 1) throw std::invalid_argument("ksvd: atom count must be >= 1");
  if (n < opt.atoms) throw std::invalid_argument("ksvd: need at least as many samples as atoms");
  if (opt.iterations < 1) throw std::invalid_argument("ksvd: iterations must be >= 1");
  if (!X.allFinite()) throw std::invalid_argument("ksvd: non-finite samples");
  if (opt.sparsity < 1 || opt.sparsity > std::min<Eigen::Index>(X.rows(), opt.atoms))
    throw std::invalid_argument("ksvd: sparsity must be in [1, min(m, k)]");

  std::vector<Eigen::Index> nonzero;
  for (Eigen::Index i = 0; i < n; ++i)
    if (X.col(i).squaredNorm() > 0) nonzero.push_back(i);
  if (nonzero.empty()) throw std::invalid_argument("ksvd: sample matrix is all zero");

  // Initial atoms: distinct random non-zero samples; cycle if there are fewer than k.
  Rng rng(opt.seed);
  shuffle(nonzero, rng);
  Eigen::MatrixXd init(X.rows(), opt.atoms);
  for (int j = 0; j < opt.atoms; ++j) {
    Eigen::VectorXd a = X.col(nonzero[static_cast<size_t>(j) % nonzero.size()]).normalized();
    if (static_cast<size_t>(j) >= nonzero.size()) {
      for (Eigen::Index r = 0; r < a.size(); ++r) a[r] += 1e-3 * standard_normal(rng);
      a.normalize();
    }
    detail::canonicalize_sign(a);
    init.col(j) = a;
  }

  KsvdResult res;
  Eigen::MatrixXd atoms = std::move(init);
  Dictionary dict(atoms, opt.patch_side);
  res.codes = detail::code_all(X, dict, opt.sparsity, opt.threads);
  Eigen::VectorXd errors = reconstruction_errors(X, dict, res.codes);
  const double denom = static_cast<double>(X.rows() * n);
  res.mse_trace.push_back(errors.sum() / denom);

  for (int it = 0; it < opt.iterations; ++it) {
    if (it > 0) {
      // Recode, keeping a sample's previous code when OMP does not improve it.
      auto fresh = detail::code_all(X, dict, opt.sparsity, opt.threads);
      const Eigen::VectorXd old_err = reconstruction_errors(X, dict, res.codes);
      const Eigen::VectorXd new_err = reconstruction_errors(X, dict, fresh);
      for (Eigen::Index i = 0; i < n; ++i)
        if (new_err[i] <= old_err[i]) res.codes[static_cast<size_t>(i)] = std::move(fresh[static_cast<size_t>(i)]);
    }

    std::vector<std::vector<size_t>> users(static_cast<size_t>(opt.atoms));
    for (size_t i = 0; i < res.codes.size(); ++i)
      for (const auto& e : res.codes[i].entries) users[static_cast<size_t>(e.index)].push_back(i);

    for (int j = 0; j < opt.atoms; ++j) {
      AtomUpdate up = users[static_cast<size_t>(j)].empty()
                          ? detail::reseed_atom(atoms, res.codes, X)
                          : detail::rank_one_update(atoms, res.codes, X, j, users[static_cast<size_t>(j)]);
      atoms.col(j) = up.atom;
      res.reseeded_atoms += up.reseeded ? 1 : 0;
      for (const auto& [i, v] : up.coefficients)
        for (auto& e : res.codes[i].entries)
          if (e.index == j) e.value = v;
    }
    for (auto& c : res.codes)
      std::erase_if(c.entries, [](const SparseCode::Entry& e) { return e.value == 0.0; });

    // Column norms drift by rounding only; renormalize before revalidating.
    for (Eigen::Index j = 0; j < atoms.cols(); ++j) atoms.col(j).normalize();
    dict = Dictionary(atoms, opt.patch_side);
    res.mse_trace.push_back(reconstruction_mse(X, dict, res.codes));
  }
  res.dictionary = std::move(dict);
  return res;
}

inline Dictionary ksvd_learn(const Eigen::MatrixXd& X, int atoms, int sparsity, int iterations, uint64_t seed,
                             int patch_side = 0) {
  KsvdOptions opt;
  opt.atoms = atoms;
  opt.sparsity = sparsity;
  opt.iterations = iterations;
  opt.seed = seed;
  opt.patch_side = patch_side;
  return ksvd_learn_traced(X, opt).dictionary;
}

// ---------------------------------------------------------------------------
// Patch sampling

inline constexpr double kMinPatchVariance = 1e-6;

// Mean-subtracted side x side patch with top-left corner (x, y).
inline Eigen::VectorXd extract_patch(const Image& img, int x, int y, int side) {
  Eigen::VectorXd p(side * side);
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) p[r * side + c] = img.at(y + r, x + c);
  p.array() -= p.mean();
  return p;
}

// Uniformly placed, mean-subtracted patches; low-variance draws are retried
// up to max_retries times and then skipped.
inline Eigen::MatrixXd sample_patches(const std::vector<Image>& corpus, int per_image, int side, uint64_t seed,
                                      int max_retries = 10) {
  if (corpus.empty()) throw std::invalid_argument("sample_patches: empty corpus");
  if (side < 1 || per_image < 0) throw std::invalid_argument("sample_patches: bad patch size or count");
  for (const auto& img : corpus)
    if (img.width < side || img.height < side)
      throw std::invalid_argument("sample_patches: image smaller than patch");

  Rng rng(seed);
  std::vector<Eigen::VectorXd> cols;
  for (const auto& img : corpus) {
    for (int draw = 0; draw < per_image; ++draw) {
      for (int attempt = 0; attempt <= max_retries; ++attempt) {
        const int x = uniform_int(rng, 0, img.width - side);
        const int y = uniform_int(rng, 0, img.height - side);
        Eigen::VectorXd p = extract_patch(img, x, y, side);
        if (p.squaredNorm() / static_cast<double>(p.size()) >= kMinPatchVariance) {
          cols.push_back(std::move(p));
          break;
        }
      }
    }
  }
  Eigen::MatrixXd X(side * side, static_cast<Eigen::Index>(cols.size()));
  for (size_t i = 0; i < cols.size(); ++i) X.col(static_cast<Eigen::Index>(i)) = cols[i];
  return X;
}

// ---------------------------------------------------------------------------
// Dictionary file: "HSCD", u32 version, u32 patch_side, u32 m, u32 k, then
// k*m little-endian doubles, column-major.

inline constexpr uint32_t kDictionaryFormatVersion = 1;

inline void write_dictionary(const Dictionary& dict, std::ostream& os) {
  os.write("HSCD", 4);
  io::put_u32(os, kDictionaryFormatVersion);
  io::put_u32(os, static_cast<uint32_t>(dict.patch_side()));
  io::put_u32(os, static_cast<uint32_t>(dict.m()));
  io::put_u32(os, static_cast<uint32_t>(dict.k()));
  for (int j = 0; j < dict.k(); ++j)
    for (int i = 0; i < dict.m(); ++i) io::put_f64(os, dict.atoms()(i, j));
}

inline Dictionary read_dictionary(std::istream& is) {
  char magic[4];
  io::read_exact(is, magic, 4);
  if (std::string_view(magic, 4) != "HSCD") throw DataError("dictionary: bad magic");
  if (io::get_u32(is) != kDictionaryFormatVersion) throw DataError("dictionary: unsupported version");
  const uint32_t side = io::get_u32(is);
  const uint32_t m = io::get_u32(is);
  const uint32_t k = io::get_u32(is);
  if (m == 0 || k == 0 || m > (1u << 20) || k > (1u << 20)) throw DataError("dictionary: bad dimensions");
  Eigen::MatrixXd atoms(m, k);
  for (uint32_t j = 0; j < k; ++j)
    for (uint32_t i = 0; i < m; ++i) atoms(i, j) = io::get_f64(is);
  try {
    return Dictionary(std::move(atoms), static_cast<int>(side));
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("dictionary: ") + e.what());
  }
}

inline void save_dictionary(const Dictionary& dict, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open for writing: " + path);
  write_dictionary(dict, os);
}

inline Dictionary load_dictionary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open: " + path);
  return read_dictionary(is);
}

inline nlohmann::json dictionary_to_json(const Dictionary& dict) {
  nlohmann::json atoms = nlohmann::json::array();
  for (int j = 0; j < dict.k(); ++j) {
    nlohmann::json col = nlohmann::json::array();
    for (int i = 0; i < dict.m(); ++i) col.push_back(dict.atoms()(i, j));
    atoms.push_back(std::move(col));
  }
  return {{"magic", "HSCD"},  {"version", kDictionaryFormatVersion}, {"patch_side", dict.patch_side()},
          {"m", dict.m()},    {"k", dict.k()},                        {"atoms", std::move(atoms)}};
}

}  // namespace hsc

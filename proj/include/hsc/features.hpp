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

// Character window descriptors: histograms of sparse codes (HSC) and the
// 31-channel HOG variant used as a baseline.
//
// Both descriptors work on a 48x48 window divided into 8x8 cells. Cell (r, c)
// is centered at pixel coordinate (8r + 3.5, 8c + 3.5); per-pixel
// contributions are spread over the four surrounding cell centers with
// bilinear weights.

#pragma once

#include <optional>
#include <variant>

#include "hsc/sparse.hpp"

namespace hsc {

inline constexpr int kWindowSide = 48;
inline constexpr int kCellSide = 8;
inline constexpr int kCellGrid = kWindowSide / kCellSide;  // 6
inline constexpr int kInteriorGrid = kCellGrid - 2;        // 4
inline constexpr int kHogChannels = 31;
inline constexpr int kHogLength = kCellGrid * kCellGrid * kHogChannels;  // 1116
inline constexpr double kDefaultBoxCoxSigma = 0.25;

using FeatureVector = std::vector<double>;

// Cell vectors laid out (row, col, channel), row-major.
struct CellGrid {
  int rows = 0;
  int cols = 0;
  int dim = 0;
  std::vector<double> values;

  CellGrid() = default;
  CellGrid(int r, int c, int d) : rows(r), cols(c), dim(d), values(static_cast<size_t>(r) * c * d, 0.0) {}
  double* cell(int r, int c) { return values.data() + (static_cast<size_t>(r) * cols + c) * dim; }
  const double* cell(int r, int c) const { return values.data() + (static_cast<size_t>(r) * cols + c) * dim; }
};

struct CellWeight {
  int row = 0;
  int col = 0;
  double weight = 0;
};

// The four cells surrounding pixel coordinate (y, x), including cells that
// fall outside the grid. Weights sum to 1.
inline std::array<CellWeight, 4> bilinear_cell_weights(double y, double x) {
  const double cy = (y - 3.5) / kCellSide;
  const double cx = (x - 3.5) / kCellSide;
  const int r0 = static_cast<int>(std::floor(cy));
  const int c0 = static_cast<int>(std::floor(cx));
  const double fy = cy - r0;
  const double fx = cx - c0;
  return {{{r0, c0, (1 - fy) * (1 - fx)},
           {r0, c0 + 1, (1 - fy) * fx},
           {r0 + 1, c0, fy * (1 - fx)},
           {r0 + 1, c0 + 1, fy * fx}}};
}

inline Image to_window(const Image& img) {
  if (img.empty()) throw std::invalid_argument("empty window");
  return resize_bilinear(img, kWindowSide, kWindowSide);
}

// ---------------------------------------------------------------------------
// Box-Cox power transform

inline double boxcox(double f, double sigma = kDefaultBoxCoxSigma) {
  if (!(f >= 0)) throw std::invalid_argument("boxcox: negative input");
  if (!(sigma > 0 && sigma <= 1)) throw std::invalid_argument("boxcox: sigma must be in (0, 1]");
  return std::pow(f, sigma);
}

inline std::vector<double> boxcox(std::vector<double> values, double sigma = kDefaultBoxCoxSigma) {
  for (auto& v : values) v = boxcox(v, sigma);
  return values;
}

// ---------------------------------------------------------------------------
// Per-pixel sparse codes

struct CodeMap {
  int width = 0;
  int height = 0;
  std::vector<SparseCode> codes;  // row-major
  const SparseCode& at(int y, int x) const { return codes[static_cast<size_t>(y) * width + x]; }
};

// Codes the mean-subtracted patch centered on every pixel of a 48x48 window
// (replicate padding at the borders). Flat patches get empty codes.
inline CodeMap pixel_codes(const Image& window, const Dictionary& dict, int sparsity) {
  if (window.width != kWindowSide || window.height != kWindowSide)
    throw std::invalid_argument("pixel_codes: window must be 48x48");
  const int side = dict.patch_side();
  if (side <= 0 || side % 2 == 0) throw std::invalid_argument("pixel_codes: dictionary patch side must be odd");
  detail::check_budget(sparsity, dict);
  const int half = side / 2;
  const int npix = kWindowSide * kWindowSide;

  Eigen::MatrixXd patches(side * side, npix);
  for (int y = 0; y < kWindowSide; ++y) {
    for (int x = 0; x < kWindowSide; ++x) {
      auto col = patches.col(y * kWindowSide + x);
      for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c) col[r * side + c] = window.clamped(y + r - half, x + c - half);
      col.array() -= col.mean();
    }
  }
  const Eigen::MatrixXd corr = dict.atoms().transpose() * patches;
  const Eigen::VectorXd norms = patches.colwise().squaredNorm().transpose();

  CodeMap map;
  map.width = map.height = kWindowSide;
  map.codes.resize(static_cast<size_t>(npix));
  for (int p = 0; p < npix; ++p) {
    // Patches that are flat up to rounding carry no structure.
    const double n2 = norms[p] > 1e-20 * side * side ? norms[p] : 0.0;
    map.codes[static_cast<size_t>(p)] = omp_gram(corr.col(p), n2, dict, sparsity);
  }
  return map;
}

// Bilinear aggregation of |code| magnitudes into the 6x6 cell grid, averaged
// over each cell's 16x16 support and L2-normalized per cell. No Box-Cox.
inline CellGrid hsc_cells(const CodeMap& codes, int k) {
  if (codes.width != kWindowSide || codes.height != kWindowSide || codes.codes.size() != kWindowSide * kWindowSide)
    throw std::invalid_argument("hsc: code map must cover a 48x48 grid");
  if (k < 1) throw std::invalid_argument("hsc: k must be positive");
  CellGrid grid(kCellGrid, kCellGrid, k);
  for (int y = 0; y < kWindowSide; ++y) {
    for (int x = 0; x < kWindowSide; ++x) {
      const auto& code = codes.at(y, x);
      if (code.empty()) continue;
      for (const auto& cw : bilinear_cell_weights(y, x)) {
        if (cw.row < 0 || cw.row >= kCellGrid || cw.col < 0 || cw.col >= kCellGrid || cw.weight == 0) continue;
        double* cell = grid.cell(cw.row, cw.col);
        for (const auto& e : code.entries) {
          if (e.index < 0 || e.index >= k) throw std::invalid_argument("hsc: code index exceeds k");
          cell[e.index] += cw.weight * std::abs(e.value);
        }
      }
    }
  }
  constexpr double support = 2.0 * kCellSide * 2.0 * kCellSide;
  for (int r = 0; r < kCellGrid; ++r) {
    for (int c = 0; c < kCellGrid; ++c) {
      double* cell = grid.cell(r, c);
      double norm2 = 0;
      for (int i = 0; i < k; ++i) {
        cell[i] /= support;
        norm2 += cell[i] * cell[i];
      }
      if (norm2 > 0) {
        const double inv = 1.0 / std::sqrt(norm2);
        for (int i = 0; i < k; ++i) cell[i] *= inv;
      }
    }
  }
  return grid;
}

// Interior 4x4 cells, Box-Cox transformed, flattened to 16k values.
inline FeatureVector hsc(const CodeMap& codes, int k, double sigma = kDefaultBoxCoxSigma) {
  const CellGrid grid = hsc_cells(codes, k);
  FeatureVector out;
  out.reserve(static_cast<size_t>(kInteriorGrid * kInteriorGrid * k));
  for (int r = 1; r <= kInteriorGrid; ++r)
    for (int c = 1; c <= kInteriorGrid; ++c) {
      const double* cell = grid.cell(r, c);
      for (int i = 0; i < k; ++i) out.push_back(boxcox(cell[i], sigma));
    }
  return out;
}

// ---------------------------------------------------------------------------
// HOG, 31 channels per cell: 18 contrast-sensitive orientations, 9
// contrast-insensitive orientations and 4 texture energies, one per
// normalization block in the order (top-left, top-right, bottom-left,
// bottom-right). Orientation votes are linearly interpolated between the two
// nearest of 18 bins centered at multiples of 20 degrees.

inline FeatureVector hog(const Image& window) {
  if (window.width != kWindowSide || window.height != kWindowSide)
    throw std::invalid_argument("hog: window must be 48x48");
  constexpr int G = kCellGrid;
  constexpr int kBins = 18;
  constexpr double kTruncate = 0.2;
  constexpr double kEps = 1e-4;
  std::vector<double> hist(static_cast<size_t>(G * G * kBins), 0.0);

  for (int y = 0; y < kWindowSide; ++y) {
    for (int x = 0; x < kWindowSide; ++x) {
      const double dx = window.clamped(y, x + 1) - window.clamped(y, x - 1);
      const double dy = window.clamped(y + 1, x) - window.clamped(y - 1, x);
      const double mag = std::sqrt(dx * dx + dy * dy);
      if (mag == 0) continue;
      double t = std::atan2(dy, dx) / (std::numbers::pi / 9.0);
      if (t < 0) t += kBins;
      int b0 = static_cast<int>(std::floor(t));
      const double frac = t - b0;
      b0 %= kBins;
      const int b1 = (b0 + 1) % kBins;
      for (const auto& cw : bilinear_cell_weights(y, x)) {
        if (cw.row < 0 || cw.row >= G || cw.col < 0 || cw.col >= G || cw.weight == 0) continue;
        double* h = &hist[static_cast<size_t>((cw.row * G + cw.col) * kBins)];
        h[b0] += cw.weight * mag * (1 - frac);
        h[b1] += cw.weight * mag * frac;
      }
    }
  }

  std::vector<double> energy(static_cast<size_t>(G * G), 0.0);
  for (int c = 0; c < G * G; ++c)
    for (int o = 0; o < 9; ++o) {
      const double u = hist[static_cast<size_t>(c * kBins + o)] + hist[static_cast<size_t>(c * kBins + o + 9)];
      energy[static_cast<size_t>(c)] += u * u;
    }
  auto cell_energy = [&](int r, int c) {
    return energy[static_cast<size_t>(std::clamp(r, 0, G - 1) * G + std::clamp(c, 0, G - 1))];
  };
  auto block_norm = [&](int r0, int c0) {
    const double e = cell_energy(r0, c0) + cell_energy(r0, c0 + 1) + cell_energy(r0 + 1, c0) + cell_energy(r0 + 1, c0 + 1);
    return 1.0 / std::sqrt(e + kEps);
  };

  FeatureVector out(static_cast<size_t>(kHogLength), 0.0);
  for (int r = 0; r < G; ++r) {
    for (int c = 0; c < G; ++c) {
      const std::array<double, 4> norms = {block_norm(r - 1, c - 1), block_norm(r - 1, c), block_norm(r, c - 1),
                                           block_norm(r, c)};
      const double* h = &hist[static_cast<size_t>((r * G + c) * kBins)];
      double* f = &out[static_cast<size_t>((r * G + c) * kHogChannels)];
      for (int o = 0; o < kBins; ++o) {
        double s = 0;
        for (int j = 0; j < 4; ++j) {
          const double v = std::min(h[o] * norms[j], kTruncate);
          s += v;
          f[27 + j] += v;
        }
        f[o] = 0.5 * s;
      }
      for (int o = 0; o < 9; ++o) {
        double s = 0;
        for (int j = 0; j < 4; ++j) s += std::min((h[o] + h[o + 9]) * norms[j], kTruncate);
        f[18 + o] = 0.5 * s;
      }
      for (int j = 0; j < 4; ++j) f[27 + j] *= 0.2357;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Extractor configuration shared by training, detection and the CLI.

enum class FeatureKind { Hsc, Hog };

inline std::string to_string(FeatureKind k) { return k == FeatureKind::Hsc ? "hsc" : "hog"; }

inline FeatureKind parse_feature_kind(std::string_view s) {
  if (s == "hsc") return FeatureKind::Hsc;
  if (s == "hog") return FeatureKind::Hog;
  throw std::invalid_argument("unknown feature kind: " + std::string(s));
}

class FeatureExtractor {
 public:
  static FeatureExtractor make_hog() { return FeatureExtractor(FeatureKind::Hog, std::nullopt, 0, 0); }
  static FeatureExtractor make_hsc(Dictionary dict, int sparsity = 2, double sigma = kDefaultBoxCoxSigma) {
    if (sparsity < 1 || sparsity > 8) throw std::invalid_argument("hsc: per-pixel sparsity must be in [1, 8]");
    return FeatureExtractor(FeatureKind::Hsc, std::move(dict), sparsity, sigma);
  }

  FeatureKind kind() const { return kind_; }
  int sparsity() const { return sparsity_; }
  double sigma() const { return sigma_; }
  const Dictionary* dictionary() const { return dict_ ? &*dict_ : nullptr; }

  size_t dimension() const {
    return kind_ == FeatureKind::Hog ? static_cast<size_t>(kHogLength)
                                     : static_cast<size_t>(kInteriorGrid * kInteriorGrid * dict_->k());
  }

  // Windows of any size are resized to 48x48 first.
  FeatureVector operator()(const Image& window) const {
    const Image w = to_window(window);
    if (kind_ == FeatureKind::Hog) return hog(w);
    return hsc(pixel_codes(w, *dict_, sparsity_), dict_->k(), sigma_);
  }

 private:
  FeatureExtractor(FeatureKind kind, std::optional<Dictionary> dict, int sparsity, double sigma)
      : kind_(kind), dict_(std::move(dict)), sparsity_(sparsity), sigma_(sigma) {}

  FeatureKind kind_;
  std::optional<Dictionary> dict_;
  int sparsity_;
  double sigma_;
};

// ---------------------------------------------------------------------------
// Feature dump: u32 window count, u32 feature length, then float32 rows (LE).

inline void write_feature_dump(const std::vector<FeatureVector>& rows, std::ostream& os) {
  const size_t len = rows.empty() ? 0 : rows.front().size();
  io::put_u32(os, static_cast<uint32_t>(rows.size()));
  io::put_u32(os, static_cast<uint32_t>(len));
  for (const auto& r : rows) {
    if (r.size() != len) throw std::invalid_argument("feature dump: ragged rows");
    for (double v : r) io::put_f32(os, static_cast<float>(v));
  }
}

inline std::vector<FeatureVector> read_feature_dump(std::istream& is) {
  const uint32_t count = io::get_u32(is);
  const uint32_t len = io::get_u32(is);
  std::vector<FeatureVector> rows(count, FeatureVector(len));
  for (auto& r : rows)
    for (auto& v : r) v = io::get_f32(is);
  return rows;
}

inline void write_feature_csv(const std::vector<FeatureVector>& rows, std::ostream& os) {
  std::ostringstream line;
  line.precision(9);
  for (const auto& r : rows) {
    line.str("");
    for (size_t i = 0; i < r.size(); ++i) line << (i ? "," : "") << static_cast<float>(r[i]);
    os << line.str() << '\n';
  }
}

}  // namespace hsc

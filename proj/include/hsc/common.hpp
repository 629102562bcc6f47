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

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace hsc {

// Malformed files, unreadable inputs, inconsistent datasets.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Geometry

struct Box {
  double x = 0, y = 0, width = 0, height = 0;

  double right() const { return x + width; }
  double bottom() const { return y + height; }
  double area() const { return width * height; }
  bool valid() const { return width > 0 && height > 0 && std::isfinite(x) && std::isfinite(y); }

  friend bool operator==(const Box&, const Box&) = default;
};

inline double intersection_area(const Box& a, const Box& b) {
  const double w = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double h = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  return (w > 0 && h > 0) ? w * h : 0.0;
}

inline double iou(const Box& a, const Box& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  return uni > 0 ? inter / uni : 0.0;
}

// ---------------------------------------------------------------------------
// Grayscale image, row-major, intensities nominally in [0,1].

struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;

  Image() = default;
  Image(int w, int h, double fill = 0.0)
      : width(w), height(h), pixels(static_cast<size_t>(w) * static_cast<size_t>(h), fill) {
    if (w < 0 || h < 0) throw std::invalid_argument("Image: negative size");
  }

  bool empty() const { return width == 0 || height == 0; }
  double& at(int y, int x) { return pixels[static_cast<size_t>(y) * width + x]; }
  double at(int y, int x) const { return pixels[static_cast<size_t>(y) * width + x]; }
  double clamped(int y, int x) const {
    return at(std::clamp(y, 0, height - 1), std::clamp(x, 0, width - 1));
  }

  friend bool operator==(const Image&, const Image&) = default;
};

// Bilinear resampling with pixel-center alignment (src = (dst + 0.5) * scale - 0.5).
inline Image resize_bilinear(const Image& src, int new_width, int new_height) {
  if (src.empty()) throw std::invalid_argument("resize_bilinear: empty image");
  if (new_width <= 0 || new_height <= 0) throw std::invalid_argument("resize_bilinear: bad target size");
  if (new_width == src.width && new_height == src.height) return src;
  Image dst(new_width, new_height);
  const double sx = static_cast<double>(src.width) / new_width;
  const double sy = static_cast<double>(src.height) / new_height;
  for (int y = 0; y < new_height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(src.height - 1));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, src.height - 1);
    const double wy = fy - y0;
    for (int x = 0; x < new_width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(src.width - 1));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, src.width - 1);
      const double wx = fx - x0;
      const double top = src.at(y0, x0) * (1 - wx) + src.at(y0, x1) * wx;
      const double bot = src.at(y1, x0) * (1 - wx) + src.at(y1, x1) * wx;
      dst.at(y, x) = top * (1 - wy) + bot * wy;
    }
  }
  return dst;
}

inline Image crop(const Image& src, int x, int y, int w, int h) {
  Image out(w, h);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) out.at(r, c) = src.clamped(y + r, x + c);
  return out;
}

// Binary PGM (P5, maxval 255). Intensities are quantized to 8 bits on write.
inline void write_pgm(const Image& img, std::ostream& os) {
  os << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  std::string row(static_cast<size_t>(img.width), '\0');
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const double v = std::clamp(img.at(y, x), 0.0, 1.0);
      row[x] = static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0)));
    }
    os.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

inline void write_pgm(const Image& img, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open for writing: " + path);
  write_pgm(img, os);
}

inline Image read_pgm(std::istream& is) {
  auto token = [&is]() {
    std::string tok;
    while (tok.empty()) {
      int ch = is.get();
      if (ch == EOF) throw DataError("PGM: unexpected end of header");
      if (ch == '#') {
        std::string skip;
        std::getline(is, skip);
        continue;
      }
      while (ch != EOF && !std::isspace(ch)) {
        tok.push_back(static_cast<char>(ch));
        ch = is.get();
      }
    }
    return tok;
  };
  if (token() != "P5") throw DataError("PGM: only binary P5 is supported");
  const int w = std::stoi(token());
  const int h = std::stoi(token());
  const int maxval = std::stoi(token());
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255) throw DataError("PGM: bad header");
  Image img(w, h);
  std::string buf(static_cast<size_t>(w) * h, '\0');
  is.read(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (is.gcount() != static_cast<std::streamsize>(buf.size())) throw DataError("PGM: truncated pixel data");
  for (size_t i = 0; i < buf.size(); ++i)
    img.pixels[i] = static_cast<unsigned char>(buf[i]) / static_cast<double>(maxval);
  return img;
}

inline Image read_pgm(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open: " + path);
  return read_pgm(is);
}

// ---------------------------------------------------------------------------
// Seeded randomness. Only the raw mt19937_64 stream is standardized, so the
// conversions below are spelled out to keep results identical across
// standard libraries.

using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline size_t uniform_index(Rng& rng, size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: empty range");
  const uint64_t limit = std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % n;
  uint64_t v;
  do v = rng();
  while (v >= limit);
  return static_cast<size_t>(v % n);
}

inline int uniform_int(Rng& rng, int lo, int hi) {  // inclusive
  return lo + static_cast<int>(uniform_index(rng, static_cast<size_t>(hi - lo + 1)));
}

inline double uniform_real(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

inline double standard_normal(Rng& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_index(rng, i)]);
}

// ---------------------------------------------------------------------------
// Little-endian binary helpers.

namespace io {

inline void put_u32(std::ostream& os, uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 4);
}

inline void put_f64(std::ostream& os, double v) {
  const auto bits = std::bit_cast<uint64_t>(v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

inline void put_f32(std::ostream& os, float v) { put_u32(os, std::bit_cast<uint32_t>(v)); }

inline void put_string(std::ostream& os, std::string_view s) {
  put_u32(os, static_cast<uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline void read_exact(std::istream& is, void* dst, size_t n) {
  is.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<size_t>(is.gcount()) != n) throw DataError("unexpected end of file");
}

inline uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  read_exact(is, b, 4);
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
  return v;
}

inline double get_f64(std::istream& is) {
  unsigned char b[8];
  read_exact(is, b, 8);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

inline float get_f32(std::istream& is) { return std::bit_cast<float>(get_u32(is)); }

inline std::string get_string(std::istream& is, size_t max_len = 1 << 20) {
  const uint32_t n = get_u32(is);
  if (n > max_len) throw DataError("string field too long");
  std::string s(n, '\0');
  read_exact(is, s.data(), n);
  return s;
}

inline std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace io

// 64-bit FNV-1a, used for config fingerprints.
inline uint64_t fnv1a(std::string_view data, uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[i] = digits[v & 0xf];
  return s;
}

// ---------------------------------------------------------------------------
// Static-partition parallel loop. Each index writes only its own output slot,
// so results do not depend on the number of threads.

inline void parallel_for(size_t n, int threads, const std::function<void(size_t)>& body) {
  const size_t workers = std::min<size_t>(n, threads > 1 ? static_cast<size_t>(threads) : 1);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (size_t i = w; i < n; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace hsc

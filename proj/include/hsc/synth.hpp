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

// Seeded synthetic scene-text corpus: character crops for classifier
// training, cropped word images with per-character boxes, and per-image
// lexicons. Glyphs are rasterized with OpenCV's Hershey vector fonts.
//
// Requires OpenCV (core, imgproc).

#pragma once

#include <opencv2/imgproc.hpp>

#include "hsc/annotations.hpp"
#include "hsc/benchmark.hpp"

namespace hsc::synth {

inline constexpr std::array<int, 8> kFontFaces = {
    cv::FONT_HERSHEY_SIMPLEX,
    cv::FONT_HERSHEY_DUPLEX,
    cv::FONT_HERSHEY_COMPLEX,
    cv::FONT_HERSHEY_TRIPLEX,
    cv::FONT_HERSHEY_COMPLEX_SMALL,
    cv::FONT_HERSHEY_SIMPLEX | cv::FONT_ITALIC,
    cv::FONT_HERSHEY_COMPLEX | cv::FONT_ITALIC,
    cv::FONT_HERSHEY_DUPLEX | cv::FONT_ITALIC,
};

struct FontStyle {
  int face = cv::FONT_HERSHEY_SIMPLEX;
  int cap_height = 32;
  int thickness = 2;
};

// Ink coverage in [0,1], cropped to the ink bounding box. `top` is the ink
// top relative to the baseline (negative is above it).
struct Glyph {
  Image coverage;
  int top = 0;
};

inline Glyph rasterize_glyph(char c, const FontStyle& style) {
  const std::string text(1, c);
  const double scale = cv::getFontScaleFromHeight(style.face, style.cap_height, style.thickness);
  int base = 0;
  const cv::Size size = cv::getTextSize(text, style.face, scale, style.thickness, &base);
  const int pad = style.thickness + 6;
  cv::Mat canvas(size.height + base + 2 * pad, size.width + 2 * pad, CV_8U, cv::Scalar(0));
  const cv::Point origin(pad, pad + size.height);
  cv::putText(canvas, text, origin, style.face, scale, cv::Scalar(255), style.thickness, cv::LINE_AA);
  const cv::Rect ink = cv::boundingRect(canvas);
  if (ink.area() == 0) throw std::runtime_error("rasterize_glyph: glyph has no ink");
  Glyph g;
  g.coverage = Image(ink.width, ink.height);
  for (int y = 0; y < ink.height; ++y)
    for (int x = 0; x < ink.width; ++x) g.coverage.at(y, x) = canvas.at<unsigned char>(ink.y + y, ink.x + x) / 255.0;
  g.top = ink.y - origin.y;
  return g;
}

struct LineLayout {
  Image coverage;
  std::vector<Box> ink_boxes;
  std::vector<double> centers;      // horizontal center of each character cell
  std::vector<double> cell_bounds;  // n + 1 cell edges
};

struct LayoutParams {
  int height = kWindowSide;
  int baseline = 40;
  int margin_left = 12;
  int margin_right = 12;
  int spacing = 3;
  int min_pitch = 20;  // keeps neighbouring 48-px windows below 0.5 IoU
};

// Characters sit in cells of width max(ink + spacing, min_pitch), each glyph
// centered in its cell; overlapping ink combines by max.
inline LineLayout layout_line(std::string_view text, const FontStyle& style, const LayoutParams& lp) {
  std::vector<Glyph> glyphs;
  for (char c : text) glyphs.push_back(rasterize_glyph(c, style));
  std::vector<int> cells;
  int width = lp.margin_left + lp.margin_right;
  for (const auto& g : glyphs) {
    cells.push_back(std::max(g.coverage.width + lp.spacing, lp.min_pitch));
    width += cells.back();
  }
  LineLayout out;
  out.coverage = Image(std::max(width, 1), lp.height, 0.0);
  int cursor = lp.margin_left;
  out.cell_bounds.push_back(cursor);
  for (size_t i = 0; i < glyphs.size(); ++i) {
    const auto& g = glyphs[i];
    const int x0 = cursor + (cells[i] - g.coverage.width) / 2;
    const int y0 = lp.baseline + g.top;
    for (int y = 0; y < g.coverage.height; ++y)
      for (int x = 0; x < g.coverage.width; ++x) {
        const int yy = y0 + y, xx = x0 + x;
        if (yy < 0 || yy >= lp.height || xx < 0 || xx >= out.coverage.width) continue;
        out.coverage.at(yy, xx) = std::max(out.coverage.at(yy, xx), g.coverage.at(y, x));
      }
    const double top = std::max(0, y0);
    const double bottom = std::min(lp.height, y0 + g.coverage.height);
    out.ink_boxes.push_back({static_cast<double>(x0), top, static_cast<double>(g.coverage.width), bottom - top});
    out.centers.push_back(x0 + g.coverage.width / 2.0);
    cursor += cells[i];
    out.cell_bounds.push_back(cursor);
  }
  return out;
}

struct SynthConfig {
  int classes = 62;               // first N character labels
  int samples_per_class = 200;    // training crops per class
  int test_per_class = 50;
  double background_ratio = 0.15; // background crops per character crop
  int fonts = 6;                  // Hershey faces in use, at most 8
  double noise = 0.0;             // Gaussian pixel noise sigma
  double clutter = 0.0;           // probability of clutter strokes per image
  int train_words = 100;
  int test_words = 200;
  int lexicon_size = 50;
  uint64_t seed = 1;

  void validate() const {
    if (classes < 1 || classes > kBackground) throw std::invalid_argument("synth: classes must be in [1, 62]");
    if (samples_per_class < 0 || test_per_class < 0 || train_words < 0 || test_words < 0)
      throw std::invalid_argument("synth: negative counts");
    if (fonts < 1 || fonts > static_cast<int>(kFontFaces.size())) throw std::invalid_argument("synth: fonts must be in [1, 8]");
    if (!(noise >= 0) || !(clutter >= 0 && clutter <= 1) || !(background_ratio >= 0))
      throw std::invalid_argument("synth: bad noise/clutter/background settings");
    if (lexicon_size < 1) throw std::invalid_argument("synth: lexicon size must be positive");
  }
};

struct CharSample {
  Image image;
  int label = 0;
};

struct WordSample {
  Image image;
  std::string word;
  std::vector<Box> boxes;
  std::vector<std::string> lexicon;
};

struct Corpus {
  std::vector<CharSample> train_chars;
  std::vector<CharSample> test_chars;
  std::vector<WordSample> train_words;
  std::vector<WordSample> test_words;
};

// Independent stream per (part, index) so corpus parts do not perturb each other.
inline Rng sample_rng(uint64_t seed, uint64_t part, uint64_t index) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), static_cast<uint32_t>(part),
                    static_cast<uint32_t>(index), static_cast<uint32_t>(index >> 32)};
  return Rng(seq);
}

inline FontStyle random_style(Rng& rng, const SynthConfig& cfg) {
  FontStyle s;
  s.face = kFontFaces[uniform_index(rng, static_cast<size_t>(cfg.fonts))];
  s.cap_height = uniform_int(rng, 30, 35);
  s.thickness = uniform_int(rng, 2, 3);
  return s;
}

inline LayoutParams random_layout(Rng& rng, const FontStyle& style, int margin) {
  LayoutParams lp;
  lp.baseline = kWindowSide / 2 + style.cap_height / 2 + uniform_int(rng, -2, 2);
  lp.margin_left = margin + uniform_int(rng, 0, 4);
  lp.margin_right = margin + uniform_int(rng, 0, 4);
  lp.spacing = uniform_int(rng, 2, 5);
  return lp;
}

// Foreground/background intensities; a third of the images are light-on-dark.
inline std::pair<double, double> random_colors(Rng& rng) {
  double bg = uniform_real(rng, 0.6, 1.0);
  double fg = uniform_real(rng, 0.0, 0.35);
  if (uniform01(rng) < 1.0 / 3.0) std::swap(bg, fg);
  return {fg, bg};
}

inline Image composite(const Image& coverage, double fg, double bg) {
  Image out(coverage.width, coverage.height);
  for (size_t i = 0; i < out.pixels.size(); ++i) out.pixels[i] = bg + (fg - bg) * coverage.pixels[i];
  return out;
}

inline void add_clutter(Image& img, Rng& rng, double fg, double bg) {
  cv::Mat m(img.height, img.width, CV_64F, img.pixels.data());
  const int strokes = uniform_int(rng, 1, 3);
  for (int s = 0; s < strokes; ++s) {
    const double level = bg + (fg - bg) * uniform_real(rng, 0.2, 0.6);
    const cv::Point a(uniform_int(rng, 0, img.width - 1), uniform_int(rng, 0, img.height - 1));
    const cv::Point b(uniform_int(rng, 0, img.width - 1), uniform_int(rng, 0, img.height - 1));
    if (uniform01(rng) < 0.5) cv::line(m, a, b, cv::Scalar(level), uniform_int(rng, 1, 2), cv::LINE_AA);
    else cv::circle(m, a, uniform_int(rng, 3, 12), cv::Scalar(level), 1, cv::LINE_AA);
  }
}

inline void add_noise(Image& img, Rng& rng, double sigma) {
  for (auto& p : img.pixels) p = std::clamp(p + sigma * standard_normal(rng), 0.0, 1.0);
}

// 8-bit levels, so an image survives a PGM round trip unchanged.
inline void quantize(Image& img) {
  for (auto& p : img.pixels) p = static_cast<double>(std::lround(std::clamp(p, 0.0, 1.0) * 255.0)) / 255.0;
}

// Compositing plus optional clutter and noise.
inline Image finish(const Image& coverage, Rng& rng, const SynthConfig& cfg) {
  const auto [fg, bg] = random_colors(rng);
  Image img = composite(coverage, fg, bg);
  if (cfg.clutter > 0 && uniform01(rng) < cfg.clutter) add_clutter(img, rng, fg, bg);
  if (cfg.noise > 0) add_noise(img, rng, cfg.noise);
  quantize(img);
  return img;
}

inline char random_char(Rng& rng, int classes) { return label_char(static_cast<int>(uniform_index(rng, static_cast<size_t>(classes)))); }

// A 48x48 crop centered (with up to 4 px of horizontal jitter, the sliding
// window stride granularity) on the character, usually with neighbours.
inline CharSample make_char_sample(int label, Rng& rng, const SynthConfig& cfg) {
  const FontStyle style = random_style(rng, cfg);
  std::string text;
  size_t center = 0;
  if (uniform01(rng) < 0.7) {
    text.push_back(random_char(rng, cfg.classes));
    center = 1;
  }
  text.push_back(label_char(label));
  if (uniform01(rng) < 0.7) text.push_back(random_char(rng, cfg.classes));
  const LayoutParams lp = random_layout(rng, style, 30);
  const LineLayout line = layout_line(text, style, lp);
  const Image img = finish(line.coverage, rng, cfg);
  const int x = static_cast<int>(std::lround(line.centers[center])) - kWindowSide / 2 + uniform_int(rng, -4, 4);
  return {crop(img, x, 0, kWindowSide, kWindowSide), label};
}

// Non-character windows: straddling two characters, partially off the end
// of a word, or plain background.
inline CharSample make_background_sample(Rng& rng, const SynthConfig& cfg) {
  const FontStyle style = random_style(rng, cfg);
  const double kind = uniform01(rng);
  std::string text;
  const int n = kind < 0.6 ? 2 + static_cast<int>(uniform_index(rng, 2)) : 1 + static_cast<int>(uniform_index(rng, 2));
  for (int i = 0; i < n; ++i) text.push_back(random_char(rng, cfg.classes));
  const LayoutParams lp = random_layout(rng, style, 60);
  const LineLayout line = layout_line(text, style, lp);
  const Image img = finish(line.coverage, rng, cfg);
  double cx;
  if (kind < 0.6) {
    const size_t gap = 1 + uniform_index(rng, static_cast<size_t>(n - 1));
    cx = line.cell_bounds[gap] + uniform_int(rng, -3, 3);
  } else if (kind < 0.85) {
    const bool left = uniform01(rng) < 0.5;
    const double edge = left ? line.ink_boxes.front().x : line.ink_boxes.back().right();
    cx = edge + (left ? -1 : 1) * uniform_int(rng, 8, 22);
  } else {
    cx = uniform01(rng) < 0.5 ? uniform_int(rng, 0, 10) : img.width - uniform_int(rng, 0, 10);
    cx = std::clamp(cx, 0.0, static_cast<double>(img.width));
    cx += (cx < img.width / 2.0 ? -kWindowSide / 2.0 : kWindowSide / 2.0);
  }
  return {crop(img, static_cast<int>(std::lround(cx)) - kWindowSide / 2, 0, kWindowSide, kWindowSide), kBackground};
}

// ---------------------------------------------------------------------------
// Words and lexicons

using bench::apply_casing;
using bench::Casing;
using bench::to_lower;
using bench::vocabulary;

inline Casing random_casing(Rng& rng) {
  const double u = uniform01(rng);
  return u < 0.5 ? Casing::Lower : (u < 0.75 ? Casing::Title : Casing::Upper);
}

inline bool uses_only(std::string_view w, int classes) {
  return std::all_of(w.begin(), w.end(), [classes](char c) {
    const int l = label_of(c);
    return l >= 0 && l < classes;
  });
}

// A vocabulary word in random casing (or, one time in ten, a digit string),
// restricted to the configured label subset.
inline std::string random_word(Rng& rng, const SynthConfig& cfg) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::string w;
    if (uniform01(rng) < 0.1) {
      const int n = uniform_int(rng, 3, 5);
      for (int i = 0; i < n; ++i) w.push_back(static_cast<char>('0' + uniform_index(rng, 10)));
    } else {
      w = apply_casing(vocabulary()[uniform_index(rng, vocabulary().size())], random_casing(rng));
    }
    if (uses_only(w, cfg.classes)) return w;
  }
  std::string w;  // label subset excludes the vocabulary: fall back to random strings
  const int n = uniform_int(rng, 3, 6);
  for (int i = 0; i < n; ++i) w.push_back(random_char(rng, cfg.classes));
  return w;
}

inline std::vector<std::string> make_lexicon(const std::string& truth, Rng& rng, const SynthConfig& cfg) {
  std::vector<std::string> lex{truth};
  std::vector<std::string> seen{to_lower(truth)};
  for (int attempt = 0; static_cast<int>(lex.size()) < cfg.lexicon_size && attempt < 100 * cfg.lexicon_size; ++attempt) {
    std::string w = random_word(rng, cfg);
    if (std::find(seen.begin(), seen.end(), to_lower(w)) != seen.end()) continue;
    seen.push_back(to_lower(w));
    lex.push_back(std::move(w));
  }
  // Truth at a random position.
  std::swap(lex[0], lex[uniform_index(rng, lex.size())]);
  return lex;
}

inline WordSample render_word(const std::string& word, Rng& rng, const SynthConfig& cfg) {
  const FontStyle style = random_style(rng, cfg);
  const LayoutParams lp = random_layout(rng, style, 18);
  const LineLayout line = layout_line(word, style, lp);
  WordSample s;
  s.word = word;
  s.image = finish(line.coverage, rng, cfg);
  s.boxes = line.ink_boxes;
  return s;
}

inline WordSample make_word_sample(Rng& rng, const SynthConfig& cfg) {
  const std::string word = random_word(rng, cfg);
  WordSample s = render_word(word, rng, cfg);
  s.lexicon = make_lexicon(word, rng, cfg);
  return s;
}

enum Part : uint64_t { kTrainChars = 1, kTestChars = 2, kTrainWords = 3, kTestWords = 4, kBackgroundTrain = 5, kBackgroundTest = 6 };

inline std::vector<CharSample> make_char_set(const SynthConfig& cfg, int per_class, Part part, Part bg_part, int threads) {
  const size_t chars = static_cast<size_t>(per_class) * static_cast<size_t>(cfg.classes);
  const auto backgrounds = static_cast<size_t>(std::lround(cfg.background_ratio * static_cast<double>(chars)));
  std::vector<CharSample> out(chars + backgrounds);
  parallel_for(out.size(), threads, [&](size_t i) {
    if (i < chars) {
      Rng rng = sample_rng(cfg.seed, part, i);
      out[i] = make_char_sample(static_cast<int>(i % static_cast<size_t>(cfg.classes)), rng, cfg);
    } else {
      Rng rng = sample_rng(cfg.seed, bg_part, i - chars);
      out[i] = make_background_sample(rng, cfg);
    }
  });
  return out;
}

inline std::vector<WordSample> make_word_set(const SynthConfig& cfg, int count, Part part, int threads) {
  std::vector<WordSample> out(static_cast<size_t>(count));
  parallel_for(out.size(), threads, [&](size_t i) {
    Rng rng = sample_rng(cfg.seed, part, i);
    out[i] = make_word_sample(rng, cfg);
  });
  return out;
}

inline Corpus make_corpus(const SynthConfig& cfg, int threads = 1) {
  cfg.validate();
  Corpus c;
  c.train_chars = make_char_set(cfg, cfg.samples_per_class, kTrainChars, kBackgroundTrain, threads);
  c.test_chars = make_char_set(cfg, cfg.test_per_class, kTestChars, kBackgroundTest, threads);
  c.train_words = make_word_set(cfg, cfg.train_words, kTrainWords, threads);
  c.test_words = make_word_set(cfg, cfg.test_words, kTestWords, threads);
  return c;
}

inline nlohmann::json config_to_json(const SynthConfig& cfg) {
  return {{"classes", cfg.classes},         {"samples_per_class", cfg.samples_per_class},
          {"test_per_class", cfg.test_per_class}, {"background_ratio", cfg.background_ratio},
          {"fonts", cfg.fonts},             {"noise", cfg.noise},
          {"clutter", cfg.clutter},         {"train_words", cfg.train_words},
          {"test_words", cfg.test_words},   {"lexicon_size", cfg.lexicon_size},
          {"seed", cfg.seed}};
}

// On-disk layout under `dir`:
//   chars_{train,test}.jsonl   character lists, crops in chars/{train,test}/
//   words_{train,test}.jsonl   word annotations, images in words/, lexicons in lexicons/
//   synth.json                 generator configuration
inline void write_corpus(const Corpus& corpus, const SynthConfig& cfg, const std::string& dir) {
  namespace fs = std::filesystem;
  auto name = [](size_t i, const char* ext) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%06zu%s", i, ext);
    return std::string(buf);
  };
  for (const char* split : {"train", "test"}) {
    fs::create_directories(fs::path(dir) / "chars" / split);
    fs::create_directories(fs::path(dir) / "words" / split);
    fs::create_directories(fs::path(dir) / "lexicons" / split);
  }
  auto write_chars = [&](const std::vector<CharSample>& set, const std::string& split) {
    std::vector<CharRecord> rows;
    for (size_t i = 0; i < set.size(); ++i) {
      const std::string rel = "chars/" + split + "/" + name(i, ".pgm");
      write_pgm(set[i].image, (fs::path(dir) / rel).string());
      rows.push_back({rel, set[i].label});
    }
    auto os = open_output((fs::path(dir) / ("chars_" + split + ".jsonl")).string());
    write_char_records(rows, os);
  };
  auto write_words = [&](const std::vector<WordSample>& set, const std::string& split) {
    std::vector<Annotation> rows;
    for (size_t i = 0; i < set.size(); ++i) {
      const std::string img = "words/" + split + "/" + name(i, ".pgm");
      const std::string lex = "lexicons/" + split + "/" + name(i, ".txt");
      write_pgm(set[i].image, (fs::path(dir) / img).string());
      auto los = open_output((fs::path(dir) / lex).string());
      write_lexicon(set[i].lexicon, los);
      rows.push_back({img, set[i].word, set[i].boxes, lex});
    }
    auto os = open_output((fs::path(dir) / ("words_" + split + ".jsonl")).string());
    write_annotations(rows, os);
  };
  write_chars(corpus.train_chars, "train");
  write_chars(corpus.test_chars, "test");
  write_words(corpus.train_words, "train");
  write_words(corpus.test_words, "test");
  auto os = open_output((fs::path(dir) / "synth.json").string());
  os << config_to_json(cfg).dump(2) << '\n';
}

}  // namespace hsc::synth

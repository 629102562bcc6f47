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

// Multi-scale sliding-window character detection and greedy non-maximum
// suppression.

#pragma once

#include <map>

#include "hsc/classifiers.hpp"

namespace hsc {

struct CharCandidate {
  Box box;
  int label = 0;
  double score = 0;
  int scale_index = 0;

  friend bool operator==(const CharCandidate&, const CharCandidate&) = default;
};

// Geometric pyramid: level i is the image scaled by scale_ratio^i. The
// default ratio is 2^(-1/2); 0.5 gives successive halving.
struct PyramidSpec {
  int window = kWindowSide;
  int stride = 8;
  double scale_ratio = 1.0 / std::numbers::sqrt2;
  int min_side = kWindowSide;

  void validate() const {
    if (!(scale_ratio > 0 && scale_ratio < 1)) throw std::invalid_argument("pyramid: scale_ratio must be in (0, 1)");
    if (window < 1 || stride < 1 || min_side < window) throw std::invalid_argument("pyramid: bad window geometry");
  }
};

struct PyramidLevel {
  int index = 0;
  double scale = 1;  // level pixels per original pixel
  Image image;
};

inline std::vector<PyramidLevel> build_pyramid(const Image& image, const PyramidSpec& spec) {
  spec.validate();
  if (image.empty()) throw std::invalid_argument("pyramid: empty image");
  const double base = std::max(1.0, static_cast<double>(spec.min_side) / std::min(image.width, image.height));
  std::vector<PyramidLevel> levels;
  for (int i = 0;; ++i) {
    const double s = base * std::pow(spec.scale_ratio, i);
    const int w = static_cast<int>(std::lround(image.width * s));
    const int h = static_cast<int>(std::lround(image.height * s));
    if (std::min(w, h) < spec.window) break;
    levels.push_back({i, s, resize_bilinear(image, w, h)});
  }
  return levels;
}

struct WindowRef {
  int level = 0;
  int x = 0;  // level-pixel offset
  int y = 0;
  Box box;  // original-image coordinates
};

inline std::vector<WindowRef> window_grid(const std::vector<PyramidLevel>& levels, const PyramidSpec& spec) {
  std::vector<WindowRef> refs;
  for (size_t li = 0; li < levels.size(); ++li) {
    const auto& lv = levels[li];
    for (int y = 0; y + spec.window <= lv.image.height; y += spec.stride)
      for (int x = 0; x + spec.window <= lv.image.width; x += spec.stride)
        refs.push_back({static_cast<int>(li), x, y,
                        Box{x / lv.scale, y / lv.scale, spec.window / lv.scale, spec.window / lv.scale}});
  }
  return refs;
}

struct Window {
  Image pixels;
  Box box;
  int scale_index = 0;
};

inline std::vector<Window> generate_windows(const Image& image, const PyramidSpec& spec = {}) {
  const auto levels = build_pyramid(image, spec);
  std::vector<Window> out;
  for (const auto& ref : window_grid(levels, spec))
    out.push_back({crop(levels[static_cast<size_t>(ref.level)].image, ref.x, ref.y, spec.window, spec.window), ref.box,
                   levels[static_cast<size_t>(ref.level)].index});
  return out;
}

// NMS order: score descending, then smaller x, smaller y, label order.
inline bool candidate_before(const CharCandidate& a, const CharCandidate& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.box.x != b.box.x) return a.box.x < b.box.x;
  if (a.box.y != b.box.y) return a.box.y < b.box.y;
  return a.label < b.label;
}

struct DetectOptions {
  double threshold = 0.0;
  size_t max_per_label = 30;  // 0 disables the cap
  int threads = 1;
};

// Candidates for every non-background label whose detection score exceeds
// the threshold, keeping at most max_per_label per label.
inline std::vector<CharCandidate> detect_chars(const Image& image, const CharClassifier& classifier,
                                               const FeatureExtractor& extractor, const DetectOptions& opt = {},
                                               const PyramidSpec& spec = {}) {
  if (static_cast<int>(extractor.dimension()) != feature_dim(classifier))
    throw std::invalid_argument("detect_chars: classifier does not match the feature extractor");
  const int labels = static_cast<int>(model_labels(classifier).size());
  if (labels != kNumLabels) throw std::invalid_argument("detect_chars: classifier must use the 63-label set");
  const auto levels = build_pyramid(image, spec);
  const auto refs = window_grid(levels, spec);

  std::vector<std::vector<CharCandidate>> per_window(refs.size());
  parallel_for(refs.size(), opt.threads, [&](size_t w) {
    const auto& ref = refs[w];
    const auto& lv = levels[static_cast<size_t>(ref.level)];
    const FeatureVector f = extractor(crop(lv.image, ref.x, ref.y, spec.window, spec.window));
    const ClassScores s = classify(classifier, f);
    for (int l = 0; l < kBackground; ++l) {
      const double score = detection_score(s.posterior, l);
      if (score > opt.threshold) per_window[w].push_back({ref.box, l, score, lv.index});
    }
  });

  std::vector<CharCandidate> out;
  for (auto& v : per_window) out.insert(out.end(), v.begin(), v.end());
  if (opt.max_per_label > 0) {
    std::vector<std::vector<CharCandidate>> by_label(kBackground);
    for (auto& c : out) by_label[static_cast<size_t>(c.label)].push_back(c);
    out.clear();
    for (auto& v : by_label) {
      std::stable_sort(v.begin(), v.end(), candidate_before);
      if (v.size() > opt.max_per_label) v.resize(opt.max_per_label);
      out.insert(out.end(), v.begin(), v.end());
    }
  }
  return out;
}

// Greedy suppression in candidate_before order. A kept candidate suppresses
// every later one whose IoU with it exceeds overlap_threshold (only within
// its own label when per_label is set).
inline std::vector<CharCandidate> nms(std::vector<CharCandidate> candidates, double overlap_threshold = 0.5,
                                      bool per_label = false) {
  std::stable_sort(candidates.begin(), candidates.end(), candidate_before);
  std::vector<char> suppressed(candidates.size(), 0);
  std::vector<CharCandidate> kept;
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (suppressed[i]) continue;
    kept.push_back(candidates[i]);
    for (size_t j = i + 1; j < candidates.size(); ++j) {
      if (suppressed[j] || (per_label && candidates[j].label != candidates[i].label)) continue;
      if (iou(candidates[i].box, candidates[j].box) > overlap_threshold) suppressed[j] = 1;
    }
  }
  return kept;
}

// ---------------------------------------------------------------------------
// Candidate dump: JSON lines {x, y, w, h, label, score, scale}.

inline nlohmann::json candidate_to_json(const CharCandidate& c) {
  return {{"x", c.box.x},
          {"y", c.box.y},
          {"w", c.box.width},
          {"h", c.box.height},
          {"label", character_labels().at(static_cast<size_t>(c.label))},
          {"score", c.score},
          {"scale", c.scale_index}};
}

inline CharCandidate candidate_from_json(const nlohmann::json& j) {
  CharCandidate c;
  try {
    c.box = {j.at("x").get<double>(), j.at("y").get<double>(), j.at("w").get<double>(), j.at("h").get<double>()};
    c.label = label_from_name(j.at("label").get<std::string>());
    c.score = j.at("score").get<double>();
    c.scale_index = j.at("scale").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("candidate: ") + e.what());
  }
  if (c.label < 0 || c.label == kBackground) throw DataError("candidate: invalid label");
  if (!c.box.valid() || !std::isfinite(c.score)) throw DataError("candidate: invalid box or score");
  return c;
}

inline void write_candidates(const std::vector<CharCandidate>& cands, std::ostream& os) {
  for (const auto& c : cands) os << candidate_to_json(c).dump() << '\n';
}

inline std::vector<CharCandidate> read_candidates(std::istream& is) {
  std::vector<CharCandidate> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("candidate dump: ") + e.what());
    }
    out.push_back(candidate_from_json(j));
  }
  return out;
}

}  // namespace hsc

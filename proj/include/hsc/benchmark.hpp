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

// Training-data builders for the word model: the English vocabulary used by
// the synthetic corpus, geometric-model pair sets, planted-parameter MCE
// sets, and MCE samples matched from detector output.

#pragma once

#include "hsc/mce.hpp"

namespace hsc::bench {

inline const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> words = {
      "able", "about", "above", "access", "action", "actor", "after", "again", "agent", "air", "album", "alley",
      "amber", "anchor", "angel", "animal", "apple", "april", "arena", "arrow", "artist", "autumn", "avenue", "bakery",
      "ball", "bank", "barber", "basket", "beach", "bear", "beauty", "bench", "berry", "bicycle", "bird", "black",
      "blue", "board", "boat", "book", "border", "bottle", "bread", "bridge", "bright", "brown", "budget", "burger",
      "butter", "cabin", "cable", "cafe", "camera", "camp", "candle", "canyon", "capital", "card", "cargo", "castle",
      "center", "chair", "chance", "charge", "cheese", "cherry", "chicken", "church", "cinema", "circle", "city",
      "classic", "clean", "clock", "closed", "cloud", "coast", "coffee", "color", "corner", "cotton", "country",
      "cream", "credit", "crown", "daily", "dance", "dark", "delta", "dental", "desert", "design", "diamond", "dinner",
      "doctor", "dollar", "door", "dragon", "dream", "drive", "eagle", "east", "easy", "editor", "electric", "empire",
      "energy", "engine", "entrance", "euro", "event", "exit", "express", "factory", "family", "farm", "fashion",
      "father", "festival", "field", "film", "finance", "fire", "fish", "flower", "food", "forest", "fortune", "frame",
      "free", "fresh", "friend", "front", "fruit", "garden", "gate", "gift", "glass", "global", "gold", "golf", "grand",
      "green", "grill", "group", "guitar", "hair", "hall", "harbor", "health", "heart", "hello", "hill", "history",
      "home", "honey", "horse", "hotel", "house", "island", "jazz", "jewel", "journal", "kids", "king", "kitchen",
      "lake", "lamp", "land", "laser", "leader", "lemon", "library", "light", "lion", "liquor", "local", "lounge",
      "lucky", "magic", "mail", "main", "maker", "market", "master", "meat", "media", "metro", "milk", "mint",
      "mobile", "modern", "money", "moon", "motor", "mountain", "movie", "museum", "music", "nation", "nature", "north",
      "ocean", "office", "open", "orange", "palace", "paper", "park", "party", "pasta", "people", "pepper", "phone",
      "photo", "piano", "pizza", "place", "planet", "plaza", "police", "pool", "power", "press", "prince", "public",
      "queen", "quick", "radio", "rain", "record", "river", "road", "rock", "royal", "salon", "salt", "school", "season",
      "sale", "service", "shop", "silver", "smile", "snow", "solar", "sound", "south", "space", "sport", "spring",
      "square", "star", "station", "steel", "stone", "store", "street", "studio", "style", "sugar", "summer", "sunset",
      "super", "table", "taxi", "theater", "ticket", "tiger", "time", "tower", "town", "trade", "travel", "tree",
      "union", "valley", "video", "village", "vision", "water", "west", "white", "window", "winter", "wood", "world",
      "yellow", "youth", "zone", "made", "man"};
  return words;
}

enum class Casing { Lower, Upper, Title };

inline std::string apply_casing(std::string w, Casing c) {
  for (size_t i = 0; i < w.size(); ++i) {
    const bool up = c == Casing::Upper || (c == Casing::Title && i == 0);
    const auto ch = static_cast<unsigned char>(w[i]);
    w[i] = static_cast<char>(up ? std::toupper(ch) : std::tolower(ch));
  }
  return w;
}

inline std::string to_lower(std::string s) { return apply_casing(std::move(s), Casing::Lower); }

// ---------------------------------------------------------------------------
// Geometric model pairs

// The detection window that frames a character of a cropped word image: a
// square as tall as the image, centered on the character.
inline Box char_window(const Box& ink, double image_height) {
  return {ink.x + ink.width / 2 - image_height / 2, 0, image_height, image_height};
}

struct AnnotatedWord {
  std::vector<Box> boxes;  // per-character ink boxes, left to right
  double image_height = kWindowSide;
};

// Positives: consecutive character windows, jittered by up to half a stride.
// Negatives (three per positive) are pairs the pruning rules still admit:
// skipped characters, widened gaps, and scale or baseline mismatches.
inline std::vector<PairExample> geometric_pairs(const std::vector<AnnotatedWord>& words, uint64_t seed,
                                                double jitter = 4.0) {
  Rng rng(seed);
  std::vector<PairExample> out;
  auto jittered = [&](Box b) {
    b.x += uniform_real(rng, -jitter, jitter);
    return b;
  };
  for (const auto& w : words) {
    const size_t n = w.boxes.size();
    if (n < 2) continue;
    std::vector<Box> win;
    for (const auto& b : w.boxes) win.push_back(char_window(b, w.image_height));
    for (size_t i = 0; i + 1 < n; ++i) {
      const Box a = jittered(win[i]);
      const Box b = jittered(win[i + 1]);
      out.push_back({a, b, true});
      for (int k = 0; k < 3; ++k) {
        const double u = uniform01(rng);
        Box q = b;
        if (u < 0.35 && i + 2 < n) {
          q = jittered(win[std::min(n - 1, i + 2 + uniform_index(rng, 2))]);
        } else if (u < 0.6) {
          q.x += uniform_real(rng, 0.5, 2.0) * a.width;
        } else {
          const double s = uniform01(rng) < 0.5 ? std::numbers::sqrt2 : 1 / std::numbers::sqrt2;
          q.width *= s;
          q.height *= s;
          q.y += (uniform01(rng) < 0.5 ? -1 : 1) * uniform_real(rng, 0.1, 0.4) * a.height;
        }
        out.push_back({a, q, false});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// MCE samples from detector output

struct MatchTolerance {
  double min_iou = 0.5;
};

// The ground-truth configuration: for each character, the candidate of the
// same label whose window best overlaps the character window. Returns
// nullopt when a character has no match, the matched chain violates the
// pruning rules, or the word is not in the lexicon.
inline std::optional<TrainingSample> match_training_sample(const std::vector<CharCandidate>& candidates,
                                                           const std::string& word, const AnnotatedWord& truth,
                                                           std::vector<std::string> lexicon,
                                                           const PruningRules& rules = {},
                                                           const MatchTolerance& tol = {}) {
  const auto labels = word_labels(word);
  if (!labels || labels->size() != truth.boxes.size() || labels->empty()) return std::nullopt;
  if (std::find(lexicon.begin(), lexicon.end(), word) == lexicon.end()) return std::nullopt;
  std::vector<CharCandidate> chain;
  for (size_t i = 0; i < labels->size(); ++i) {
    const Box target = char_window(truth.boxes[i], truth.image_height);
    const CharCandidate* best = nullptr;
    double best_iou = 0;
    for (const auto& c : candidates) {
      if (c.label != (*labels)[i]) continue;
      const double v = iou(c.box, target);
      if (v < tol.min_iou) continue;
      if (!best || v > best_iou || (v == best_iou && candidate_before(c, *best))) {
        best = &c;
        best_iou = v;
      }
    }
    if (!best) return std::nullopt;
    if (!chain.empty() && !feasible_successor(chain.back(), *best, rules)) return std::nullopt;
    chain.push_back(*best);
  }
  TrainingSample s;
  s.candidates = CandidateSets(candidates);
  s.truth_word = word;
  s.truth_config = std::move(chain);
  s.lexicon = std::move(lexicon);
  return s;
}

// ---------------------------------------------------------------------------
// Planted-parameter MCE set

struct PlantedConfig {
  size_t samples = 200;
  int lexicon_size = 6;
  int slots = 14;
  PSParams planted{0.5, -2.5};
  GeometricModel z = default_planted_geometry();
  uint64_t seed = 1;

  // Favors tight consecutive windows: score = 1 - 2 * gap / width.
  static GeometricModel default_planted_geometry() {
    GeometricModel z;
    z.bias = 1.0;
    z.weights[3] = -2.0;
    return z;
  }
};

// Each sample lays out a row of 48-px window slots and plants every lexicon
// word as a left-to-right chain of candidates with random detection scores,
// occasionally skipping a slot. The truth word and configuration are the
// spot_word winner under the planted parameters.
inline std::vector<TrainingSample> planted_mce_set(const PlantedConfig& cfg) {
  cfg.planted.validate();
  if (cfg.lexicon_size < 2 || cfg.slots < 2) throw std::invalid_argument("planted set: need >= 2 words and slots");
  Rng rng(cfg.seed);
  std::vector<std::string> pool;
  for (const auto& w : vocabulary())
    if (w.size() >= 3 && static_cast<int>(w.size()) <= cfg.slots / 2 + 1) pool.push_back(w);
  std::vector<TrainingSample> out;
  while (out.size() < cfg.samples) {
    std::vector<double> slot_x;
    double x = 10;
    for (int s = 0; s < cfg.slots; ++s) {
      slot_x.push_back(x);
      x += uniform_real(rng, 20, 28);
    }
    std::vector<std::string> lexicon;
    while (static_cast<int>(lexicon.size()) < cfg.lexicon_size) {
      const auto& w = pool[uniform_index(rng, pool.size())];
      if (std::find(lexicon.begin(), lexicon.end(), w) == lexicon.end()) lexicon.push_back(w);
    }
    std::vector<CharCandidate> cands;
    for (const auto& w : lexicon) {
      const int span = static_cast<int>(w.size());
      int slot = static_cast<int>(uniform_index(rng, static_cast<size_t>(std::max(1, cfg.slots - 2 * span + 1))));
      for (char ch : w) {
        if (slot >= cfg.slots) break;
        CharCandidate c;
        c.box = {slot_x[static_cast<size_t>(slot)] + uniform_real(rng, -2, 2), 0, kWindowSide, kWindowSide};
        c.label = label_of(ch);
        c.score = uniform_real(rng, 0.0, 3.0);
        cands.push_back(c);
        slot += uniform01(rng) < 0.25 ? 2 : 1;
      }
    }
    const CandidateSets sets(cands);
    const auto ranked = spot_word(sets, lexicon, cfg.z, cfg.planted);
    if (!ranked.front().config) continue;
    // Skip exact ties so the planted truth is unambiguous.
    if (ranked.size() > 1 && ranked[1].objective == ranked[0].objective) continue;
    TrainingSample s;
    s.candidates = sets;
    s.truth_word = ranked.front().word;
    s.truth_config = ranked.front().config->chosen;
    s.lexicon = std::move(lexicon);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace hsc::bench

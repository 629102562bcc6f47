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

// Dataset manifests, one JSON record per line.
//   word annotations: {"image", "word", "boxes": [[x, y, w, h], ...], "lexicon"}
//   character lists:  {"image", "label"}
// Relative paths resolve against the manifest's directory.

#pragma once

#include <filesystem>

#include "hsc/classifiers.hpp"

namespace hsc {

struct Annotation {
  std::string image;
  std::string word;
  std::vector<Box> boxes;  // empty, or one per character
  std::string lexicon;     // optional lexicon file

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct CharRecord {
  std::string image;
  int label = 0;

  friend bool operator==(const CharRecord&, const CharRecord&) = default;
};

inline nlohmann::json annotation_to_json(const Annotation& a) {
  nlohmann::json j = {{"image", a.image}, {"word", a.word}};
  if (!a.boxes.empty()) {
    nlohmann::json boxes = nlohmann::json::array();
    for (const auto& b : a.boxes) boxes.push_back({b.x, b.y, b.width, b.height});
    j["boxes"] = boxes;
  }
  if (!a.lexicon.empty()) j["lexicon"] = a.lexicon;
  return j;
}

inline Annotation annotation_from_json(const nlohmann::json& j) {
  Annotation a;
  try {
    a.image = j.at("image").get<std::string>();
    a.word = j.at("word").get<std::string>();
    if (j.contains("boxes"))
      for (const auto& b : j.at("boxes")) {
        const auto v = b.get<std::vector<double>>();
        if (v.size() != 4) throw DataError("annotation: a box needs 4 numbers");
        a.boxes.push_back({v[0], v[1], v[2], v[3]});
      }
    if (j.contains("lexicon")) a.lexicon = j.at("lexicon").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("annotation: ") + e.what());
  }
  if (a.image.empty()) throw DataError("annotation: empty image path");
  if (a.word.empty()) throw DataError("annotation: empty word");
  if (!a.boxes.empty() && a.boxes.size() != a.word.size())
    throw DataError("annotation: box count differs from word length for '" + a.word + "'");
  for (const auto& b : a.boxes)
    if (!b.valid()) throw DataError("annotation: invalid box for '" + a.word + "'");
  return a;
}

inline nlohmann::json char_record_to_json(const CharRecord& r) {
  return {{"image", r.image}, {"label", character_labels().at(static_cast<size_t>(r.label))}};
}

inline CharRecord char_record_from_json(const nlohmann::json& j) {
  CharRecord r;
  try {
    r.image = j.at("image").get<std::string>();
    r.label = label_from_name(j.at("label").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("character list: ") + e.what());
  }
  if (r.label < 0) throw DataError("character list: unknown label");
  return r;
}

namespace detail {

template <typename T, typename Parse>
std::vector<T> read_jsonl(std::istream& is, Parse parse, const char* what) {
  std::vector<T> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string(what) + " line " + std::to_string(lineno) + ": " + e.what());
    }
    out.push_back(parse(j));
  }
  return out;
}

}  // namespace detail

inline std::vector<Annotation> read_annotations(std::istream& is) {
  return detail::read_jsonl<Annotation>(is, annotation_from_json, "annotations");
}

inline std::vector<CharRecord> read_char_records(std::istream& is) {
  return detail::read_jsonl<CharRecord>(is, char_record_from_json, "character list");
}

inline void write_annotations(const std::vector<Annotation>& rows, std::ostream& os) {
  for (const auto& a : rows) os << annotation_to_json(a).dump() << '\n';
}

inline void write_char_records(const std::vector<CharRecord>& rows, std::ostream& os) {
  for (const auto& r : rows) os << char_record_to_json(r).dump() << '\n';
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open: " + path);
  return is;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open for writing: " + path);
  return os;
}

inline std::vector<Annotation> load_annotations(const std::string& path) {
  auto is = open_input(path);
  return read_annotations(is);
}

inline std::vector<CharRecord> load_char_records(const std::string& path) {
  auto is = open_input(path);
  return read_char_records(is);
}

inline std::string resolve_path(const std::string& manifest, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(manifest).parent_path() / p).string();
}

}  // namespace hsc

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

// Cropped-word evaluation. Words of two or fewer characters and words with
// non-alphanumeric characters are skipped; matching ignores case.

#pragma once

#include "hsc/annotations.hpp"
#include "hsc/pipeline.hpp"

namespace hsc {

inline bool eval_ignored(std::string_view word) {
  if (word.size() <= 2) return true;
  return !std::all_of(word.begin(), word.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; });
}

inline bool same_word(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i]))) return false;
  return true;
}

struct EvalRecord {
  std::string image;
  std::string truth;
  std::string predicted;
  double objective = -std::numeric_limits<double>::infinity();
  bool skipped = false;
  bool correct = false;
};

struct EvalReport {
  size_t total = 0;
  size_t correct = 0;
  size_t skipped = 0;
  double accuracy = 0;
  std::vector<EvalRecord> records;
  StageTimes mean_times;  // seconds per evaluated image
};

// Recomputes the counters from the records.
inline void tally(EvalReport& r) {
  r.total = r.correct = r.skipped = 0;
  for (const auto& rec : r.records) {
    if (rec.skipped) {
      ++r.skipped;
      continue;
    }
    ++r.total;
    r.correct += rec.correct ? 1 : 0;
  }
  r.accuracy = r.total > 0 ? static_cast<double>(r.correct) / static_cast<double>(r.total) : 0.0;
}

using ImageLoader = std::function<Image(const std::string&)>;

// `manifest` locates relative image and lexicon paths; `fallback_lexicon`
// serves annotations that name no lexicon file.
inline EvalReport evaluate(const Recognizer& rec, const std::vector<Annotation>& rows, const std::string& manifest,
                           const ImageLoader& load, const std::vector<std::string>& fallback_lexicon = {}) {
  EvalReport report;
  for (const auto& a : rows) {
    EvalRecord r;
    r.image = a.image;
    r.truth = a.word;
    if (eval_ignored(a.word)) {
      r.skipped = true;
      report.records.push_back(std::move(r));
      continue;
    }
    const auto lexicon = a.lexicon.empty() ? fallback_lexicon : load_lexicon(resolve_path(manifest, a.lexicon));
    if (lexicon.empty()) throw DataError("evaluate: no lexicon for " + a.image);
    const auto out = rec.recognize(load(resolve_path(manifest, a.image)), lexicon);
    r.predicted = out.top_word();
    r.objective = out.ranked.front().objective;
    r.correct = same_word(r.predicted, r.truth);
    report.mean_times.detect += out.times.detect;
    report.mean_times.nms += out.times.nms;
    report.mean_times.spot += out.times.spot;
    report.records.push_back(std::move(r));
  }
  tally(report);
  if (report.total > 0) {
    const auto n = static_cast<double>(report.total);
    report.mean_times.detect /= n;
    report.mean_times.nms /= n;
    report.mean_times.spot /= n;
  }
  return report;
}

inline nlohmann::json eval_to_json(const EvalReport& r, bool with_timings = true) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& rec : r.records)
    records.push_back({{"image", rec.image},
                       {"truth", rec.truth},
                       {"predicted", rec.predicted},
                       {"objective", finite_or_null(rec.objective)},
                       {"skipped", rec.skipped},
                       {"correct", rec.correct}});
  nlohmann::json j = {{"total", r.total},     {"correct", r.correct}, {"accuracy", r.accuracy},
                      {"skipped", r.skipped}, {"records", records}};
  if (with_timings)
    j["timings"] = {{"detect", r.mean_times.detect}, {"nms", r.mean_times.nms}, {"spot", r.mean_times.spot}};
  return j;
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline void write_eval_csv(const EvalReport& r, std::ostream& os) {
  os << "image,truth,predicted,objective,skipped,correct\n";
  std::ostringstream num;
  num.precision(17);
  for (const auto& rec : r.records) {
    num.str("");
    if (std::isfinite(rec.objective)) num << rec.objective;
    os << csv_field(rec.image) << ',' << csv_field(rec.truth) << ',' << csv_field(rec.predicted) << ',' << num.str()
       << ',' << (rec.skipped ? 1 : 0) << ',' << (rec.correct ? 1 : 0) << '\n';
  }
}

}  // namespace hsc

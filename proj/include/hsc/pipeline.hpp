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

// Cropped-word recognition: detect, suppress, spot.

#pragma once

#include <chrono>

#include "hsc/mce.hpp"

namespace hsc {

struct RecognizerOptions {
  DetectOptions detect;
  PyramidSpec pyramid;
  double nms_overlap = 0.5;
  // Per-label suppression keeps look-alike labels (l/I/1, o/O/0) at one
  // location for the lexicon to decide between.
  bool nms_per_label = true;
  PruningRules pruning;
};

struct StageTimes {
  double detect = 0;  // seconds
  double nms = 0;
  double spot = 0;
};

struct Recognition {
  std::vector<CharCandidate> raw;
  std::vector<CharCandidate> candidates;  // after suppression
  std::vector<SpotResult> ranked;
  StageTimes times;

  const std::string& top_word() const {
    static const std::string none;
    return ranked.empty() ? none : ranked.front().word;
  }
};

class Recognizer {
 public:
  Recognizer(FeatureExtractor extractor, CharClassifier classifier, GeometricModel z, PSParams params,
             RecognizerOptions opt = {})
      : extractor_(std::move(extractor)),
        classifier_(std::move(classifier)),
        z_(z),
        params_(params),
        opt_(std::move(opt)) {
    params_.validate();
    if (static_cast<int>(extractor_.dimension()) != feature_dim(classifier_))
      throw std::invalid_argument("recognizer: classifier does not match the feature extractor");
  }

  const FeatureExtractor& extractor() const { return extractor_; }
  const CharClassifier& classifier() const { return classifier_; }
  const GeometricModel& geometric() const { return z_; }
  const PSParams& params() const { return params_; }
  const RecognizerOptions& options() const { return opt_; }

  std::vector<CharCandidate> candidates(const Image& image) const {
    return nms(detect_chars(image, classifier_, extractor_, opt_.detect, opt_.pyramid), opt_.nms_overlap,
               opt_.nms_per_label);
  }

  Recognition recognize(const Image& image, const std::vector<std::string>& lexicon) const {
    using clock = std::chrono::steady_clock;
    auto since = [](clock::time_point t) { return std::chrono::duration<double>(clock::now() - t).count(); };
    Recognition r;
    auto t = clock::now();
    r.raw = detect_chars(image, classifier_, extractor_, opt_.detect, opt_.pyramid);
    r.times.detect = since(t);
    t = clock::now();
    r.candidates = nms(r.raw, opt_.nms_overlap, opt_.nms_per_label);
    r.times.nms = since(t);
    t = clock::now();
    r.ranked = spot_word(CandidateSets(r.candidates), lexicon, z_, params_, opt_.detect.threads, opt_.pruning);
    r.times.spot = since(t);
    return r;
  }

 private:
  FeatureExtractor extractor_;
  CharClassifier classifier_;
  GeometricModel z_;
  PSParams params_;
  RecognizerOptions opt_;
};

}  // namespace hsc

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

// hscr: command-line front end for dictionary learning, synthetic data,
// classifier and word-model training, recognition, evaluation and timing.
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>
#include <opencv2/imgcodecs.hpp>

#include <chrono>
#include <filesystem>
#include <iomanip>
#include <iostream>

#include "hsc/hsc.hpp"
#include "hsc/synth.hpp"

namespace fs = std::filesystem;
using namespace hsc;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Image load_image(const std::string& path) {
  if (fs::path(path).extension() == ".pgm") return read_pgm(path);
  const cv::Mat m = cv::imread(path, cv::IMREAD_GRAYSCALE);
  if (m.empty()) throw DataError("cannot read image: " + path);
  Image img(m.cols, m.rows);
  for (int y = 0; y < m.rows; ++y)
    for (int x = 0; x < m.cols; ++x) img.at(y, x) = m.at<unsigned char>(y, x) / 255.0;
  return img;
}

std::vector<std::string> list_images(const std::string& dir) {
  static const std::vector<std::string> exts = {".pgm", ".png", ".jpg", ".jpeg", ".bmp", ".tif", ".tiff"};
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    auto ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (std::find(exts.begin(), exts.end(), ext) != exts.end()) out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

void write_json_file(const nlohmann::json& j, const std::string& path) {
  auto os = open_output(path);
  os << j.dump(2) << '\n';
}

nlohmann::json read_json_file(const std::string& path) {
  auto is = open_input(path);
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::string sidecar_path(const std::string& model) { return model + ".json"; }

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

// Feature extractor described by a model's sidecar, with optional overrides.
struct ExtractorSpec {
  std::string features;  // empty: take from the sidecar
  std::string dict;
  int pixel_sparsity = 0;
  double sigma = 0;
};

FeatureExtractor make_extractor(const std::string& kind, const std::string& dict_path, int sparsity, double sigma) {
  if (parse_feature_kind(kind) == FeatureKind::Hog) return FeatureExtractor::make_hog();
  if (dict_path.empty()) throw UsageError("hsc features need --dict");
  return FeatureExtractor::make_hsc(load_dictionary(dict_path), sparsity, sigma);
}

FeatureExtractor extractor_for_model(const std::string& model_path, const ExtractorSpec& spec) {
  std::string kind = spec.features;
  int sparsity = spec.pixel_sparsity;
  double sigma = spec.sigma;
  if (fs::exists(sidecar_path(model_path))) {
    const auto meta = read_json_file(sidecar_path(model_path));
    const auto cfg = meta.value("training_config", nlohmann::json::object());
    if (kind.empty()) kind = cfg.value("features", "");
    if (sparsity == 0) sparsity = cfg.value("pixel_sparsity", 2);
    if (sigma == 0) sigma = cfg.value("sigma", kDefaultBoxCoxSigma);
  }
  if (kind.empty()) throw UsageError("feature kind unknown: pass --features or keep the model's .json sidecar");
  return make_extractor(kind, spec.dict, sparsity == 0 ? 2 : sparsity, sigma == 0 ? kDefaultBoxCoxSigma : sigma);
}

std::pair<PSParams, GeometricModel> load_params(const std::string& params_path, const std::string& geom_path) {
  PSParams p;
  GeometricModel z;
  if (!params_path.empty()) std::tie(p, z) = params_from_json(read_json_file(params_path));
  if (!geom_path.empty()) z = geometric_from_json(read_json_file(geom_path));
  return {p, z};
}

struct PipelineArgs {
  std::string model;
  std::string params;
  std::string geom;
  ExtractorSpec extractor;
  std::string nms_mode = "per-label";
  double overlap = 0.5;
  double threshold = 0.0;
  size_t max_per_label = 30;

  void add(CLI::App* cmd) {
    cmd->add_option("--model", model, "Character classifier file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--dict", extractor.dict, "Dictionary file (HSC features)")->check(CLI::ExistingFile);
    cmd->add_option("--features", extractor.features, "Override the feature kind: hsc or hog")
        ->check(CLI::IsMember({"hsc", "hog"}));
    cmd->add_option("--params", params, "Word-model params JSON (lambda1, lambda2, geometric)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--geom", geom, "Geometric model JSON, overrides the one in --params")->check(CLI::ExistingFile);
    cmd->add_option("--nms", nms_mode, "Suppression mode")->check(CLI::IsMember({"per-label", "global"}));
    cmd->add_option("--overlap", overlap, "NMS IoU threshold")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--threshold", threshold, "Detection score threshold");
    cmd->add_option("--max-per-label", max_per_label, "Candidates kept per label, 0 for all");
  }

  Recognizer build(int threads) const {
    auto [p, z] = load_params(params, geom);
    RecognizerOptions opt;
    opt.detect.threshold = threshold;
    opt.detect.max_per_label = max_per_label;
    opt.detect.threads = threads;
    opt.nms_overlap = overlap;
    opt.nms_per_label = nms_mode == "per-label";
    return Recognizer(extractor_for_model(model, extractor), load_model(model), z, p, opt);
  }
};

std::vector<FeatureVector> extract_all(const FeatureExtractor& ex, const std::vector<Image>& images, int threads) {
  std::vector<FeatureVector> rows(images.size());
  parallel_for(images.size(), threads, [&](size_t i) { rows[i] = ex(images[i]); });
  return rows;
}

Dataset load_char_dataset(const std::string& manifest, const FeatureExtractor& ex, int threads) {
  const auto records = load_char_records(manifest);
  std::vector<Image> images(records.size());
  parallel_for(records.size(), threads, [&](size_t i) { images[i] = load_image(resolve_path(manifest, records[i].image)); });
  std::vector<int> labels;
  for (const auto& r : records) labels.push_back(r.label);
  return make_dataset(extract_all(ex, images, threads), labels);
}

// ---------------------------------------------------------------------------

struct LearnDictArgs {
  std::string corpus, out, json_out;
  int patch_side = 9, atoms = 100, sparsity = 2, iterations = 50, per_image = 1000;
  uint64_t seed = 1;
};

int cmd_learn_dict(const LearnDictArgs& a, int threads) {
  std::vector<Image> corpus;
  for (const auto& p : list_images(a.corpus)) corpus.push_back(load_image(p));
  if (corpus.empty()) throw DataError("no images in " + a.corpus);
  Eigen::MatrixXd X;
  try {
    X = sample_patches(corpus, a.per_image, a.patch_side, a.seed);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  if (X.cols() < a.atoms) throw DataError("corpus yields fewer patches than atoms");
  KsvdOptions opt;
  opt.atoms = a.atoms;
  opt.sparsity = a.sparsity;
  opt.iterations = a.iterations;
  opt.seed = a.seed;
  opt.threads = threads;
  opt.patch_side = a.patch_side;
  const auto res = ksvd_learn_traced(X, opt);
  save_dictionary(res.dictionary, a.out);
  if (!a.json_out.empty()) write_json_file(dictionary_to_json(res.dictionary), a.json_out);
  std::cout << "patches: " << X.cols() << "\nfinal MSE: " << std::setprecision(10) << res.mse_trace.back() << '\n';
  return 0;
}

struct SynthArgs {
  synth::SynthConfig cfg;
  std::string out;
};

int cmd_synth(const SynthArgs& a, int threads) {
  const auto corpus = synth::make_corpus(a.cfg, threads);
  synth::write_corpus(corpus, a.cfg, a.out);
  std::cout << "train chars: " << corpus.train_chars.size() << "\ntest chars: " << corpus.test_chars.size()
            << "\ntrain words: " << corpus.train_words.size() << "\ntest words: " << corpus.test_words.size() << '\n';
  return 0;
}

struct TrainArgs {
  std::string features = "hsc", classifier = "svm", train, test, dict, out, dump;
  int pixel_sparsity = 2;
  double sigma = kDefaultBoxCoxSigma;
  SvmConfig svm;
  SCConfig sc;
  FernsConfig ferns;
  uint64_t seed = 1;
};

int cmd_train(const TrainArgs& a, int threads) {
  const auto ex = make_extractor(a.features, a.dict, a.pixel_sparsity, a.sigma);
  const Dataset train = load_char_dataset(a.train, ex, threads);
  if (!a.dump.empty()) {
    auto os = open_output(a.dump);
    std::vector<FeatureVector> rows(train.size());
    for (size_t i = 0; i < train.size(); ++i) {
      const auto r = train.features.row(static_cast<Eigen::Index>(i));
      rows[i].assign(r.data(), r.data() + r.size());
    }
    write_feature_dump(rows, os);
  }
  nlohmann::json cfg = {{"features", a.features},
                        {"classifier", a.classifier},
                        {"pixel_sparsity", a.pixel_sparsity},
                        {"sigma", a.sigma},
                        {"seed", a.seed},
                        {"train_samples", train.size()}};
  if (!a.dict.empty()) cfg["dictionary_hash"] = hex64(fnv1a(io::read_file(a.dict)));
  CharClassifier model;
  if (a.classifier == "svm") {
    SvmConfig c = a.svm;
    c.seed = a.seed;
    c.threads = threads;
    cfg["C"] = c.C;
    cfg["tolerance"] = c.tolerance;
    cfg["max_epochs"] = c.max_epochs;
    model = train_linear(train, c);
  } else if (a.classifier == "sc") {
    SCConfig c = a.sc;
    c.seed = a.seed;
    c.threads = threads;
    cfg["basis"] = c.basis;
    cfg["sc_sparsity"] = c.sparsity;
    cfg["sc_iterations"] = c.iterations;
    model = train_sc(train, c);
  } else {
    FernsConfig c = a.ferns;
    c.seed = a.seed;
    cfg["ferns"] = c.ferns;
    cfg["depth"] = c.depth;
    model = train_ferns(train, c);
  }
  save_model(model, a.out);
  write_json_file(model_metadata(model, cfg), sidecar_path(a.out));
  std::cout << "train accuracy: " << std::setprecision(6) << accuracy(model, train) << '\n';
  if (!a.test.empty()) {
    const Dataset test = load_char_dataset(a.test, ex, threads);
    std::cout << "held-out accuracy: " << accuracy(model, test) << " (" << test.size() << " crops)\n";
  }
  return 0;
}

std::vector<bench::AnnotatedWord> annotated_words(const std::string& manifest, const std::vector<Annotation>& rows) {
  std::vector<bench::AnnotatedWord> out;
  for (const auto& a : rows) {
    if (a.boxes.empty()) continue;
    out.push_back({a.boxes, static_cast<double>(load_image(resolve_path(manifest, a.image)).height)});
  }
  return out;
}

struct TrainGeomArgs {
  std::string annotations, out;
  double C = 100;
  uint64_t seed = 1;
};

int cmd_train_geom(const TrainGeomArgs& a, int) {
  const auto rows = load_annotations(a.annotations);
  const auto words = annotated_words(a.annotations, rows);
  const auto pairs = bench::geometric_pairs(words, a.seed);
  if (pairs.empty()) throw DataError("no annotated multi-character words with boxes");
  SvmConfig cfg;
  cfg.C = a.C;
  cfg.seed = a.seed;
  const auto z = train_geometric(pairs, cfg);
  write_json_file(geometric_to_json(z), a.out);
  std::cout << "pairs: " << pairs.size() << "\npair accuracy: " << pair_accuracy(z, pairs) << '\n';
  return 0;
}

struct MceArgs {
  std::string annotations, out, trace;
  PipelineArgs pipeline;
  MCEConfig cfg;
  PSParams init;
  size_t planted = 0;
  uint64_t planted_seed = 1;
};

int cmd_mce_train(MceArgs a, int threads) {
  a.cfg.threads = threads;
  std::vector<TrainingSample> data;
  GeometricModel z;
  size_t unmatched = 0;
  if (a.planted > 0) {
    bench::PlantedConfig pc;
    pc.samples = a.planted;
    pc.seed = a.planted_seed;
    data = bench::planted_mce_set(pc);
    z = pc.z;
  } else {
    if (a.annotations.empty() || a.pipeline.model.empty())
      throw UsageError("mce-train needs --annotations and --model (or --planted)");
    const Recognizer rec = a.pipeline.build(threads);
    z = rec.geometric();
    for (const auto& row : load_annotations(a.annotations)) {
      if (row.boxes.empty() || row.lexicon.empty() || eval_ignored(row.word)) {
        ++unmatched;
        continue;
      }
      const Image img = load_image(resolve_path(a.annotations, row.image));
      auto s = bench::match_training_sample(rec.candidates(img), row.word,
                                            {row.boxes, static_cast<double>(img.height)},
                                            load_lexicon(resolve_path(a.annotations, row.lexicon)));
      if (s) data.push_back(std::move(*s));
      else ++unmatched;
    }
    if (data.empty()) throw DataError("no annotation could be matched to detections");
  }
  const auto res = mce_train(data, z, a.init, a.cfg);
  const nlohmann::json meta = {{"samples", data.size()},
                               {"unmatched", unmatched},
                               {"skipped_no_rival", res.skipped},
                               {"xi", a.cfg.xi},
                               {"learning_rate", a.cfg.learning_rate},
                               {"epochs", a.cfg.epochs},
                               {"seed", a.cfg.seed},
                               {"init", {{"lambda1", a.init.lambda1}, {"lambda2", a.init.lambda2}}}};
  write_json_file(params_to_json(res.params, z, meta), a.out);
  if (!a.trace.empty()) {
    auto os = open_output(a.trace);
    write_loss_trace(res.trace, os);
  }
  std::cout << std::setprecision(6) << "samples: " << data.size() << "\nloss: " << res.trace.front().mean_loss
            << " -> " << res.trace.back().mean_loss << "\naccuracy: " << res.trace.front().accuracy << " -> "
            << res.trace.back().accuracy << "\nlambda1: " << res.params.lambda1 << "\nlambda2: " << res.params.lambda2
            << '\n';
  return 0;
}

struct RecognizeArgs {
  std::string image, lexicon, dump;
  PipelineArgs pipeline;
};

int cmd_recognize(const RecognizeArgs& a, int threads) {
  const Recognizer rec = a.pipeline.build(threads);
  const auto lexicon = load_lexicon(a.lexicon);
  if (lexicon.empty()) throw DataError("empty lexicon: " + a.lexicon);
  const auto out = rec.recognize(load_image(a.image), lexicon);
  if (!a.dump.empty()) {
    auto os = open_output(a.dump);
    write_candidates(out.candidates, os);
  }
  std::cout << report_to_json(make_report(a.image, out.ranked)).dump() << '\n';
  return 0;
}

struct EvalArgs {
  std::string annotations, lexicon, out_dir;
  PipelineArgs pipeline;
};

int cmd_eval(const EvalArgs& a, int threads) {
  const Recognizer rec = a.pipeline.build(threads);
  const auto rows = load_annotations(a.annotations);
  const auto fallback = a.lexicon.empty() ? std::vector<std::string>{} : load_lexicon(a.lexicon);
  const auto report = evaluate(rec, rows, a.annotations, load_image, fallback);
  if (!a.out_dir.empty()) {
    fs::create_directories(a.out_dir);
    write_json_file(eval_to_json(report), (fs::path(a.out_dir) / "report.json").string());
    auto os = open_output((fs::path(a.out_dir) / "records.csv").string());
    write_eval_csv(report, os);
  }
  std::cout << "evaluated: " << report.total << "\ncorrect: " << report.correct << "\nskipped: " << report.skipped
            << "\naccuracy: " << std::setprecision(6) << report.accuracy << '\n';
  return 0;
}

struct BenchArgs {
  std::string annotations, stage = "all";
  PipelineArgs pipeline;
  size_t limit = 50;
};

// Mean wall time per sample for each stage.
int cmd_bench(const BenchArgs& a, int threads) {
  const Recognizer rec = a.pipeline.build(threads);
  auto rows = load_annotations(a.annotations);
  if (rows.size() > a.limit) rows.resize(a.limit);
  if (rows.empty()) throw DataError("no annotations to time");
  std::vector<Image> images;
  for (const auto& r : rows) images.push_back(load_image(resolve_path(a.annotations, r.image)));

  struct Row {
    std::string stage;
    size_t samples = 0;
    double total = 0;
  };
  std::vector<Row> table;
  const bool all = a.stage == "all";
  std::vector<Image> windows;
  for (const auto& img : images)
    for (auto& w : generate_windows(img, rec.options().pyramid)) windows.push_back(std::move(w.pixels));
  std::vector<FeatureVector> feats;
  if (all || a.stage == "features" || a.stage == "classify") {
    auto t = std::chrono::steady_clock::now();
    for (const auto& w : windows) feats.push_back(rec.extractor()(w));
    table.push_back({"features", windows.size(), seconds_since(t)});
  }
  if (all || a.stage == "classify") {
    auto t = std::chrono::steady_clock::now();
    for (const auto& f : feats) (void)classify(rec.classifier(), f);
    table.push_back({"classify", feats.size(), seconds_since(t)});
  }
  std::vector<std::vector<CharCandidate>> cands(images.size());
  if (all || a.stage == "detect" || a.stage == "dp") {
    auto t = std::chrono::steady_clock::now();
    for (size_t i = 0; i < images.size(); ++i) cands[i] = rec.candidates(images[i]);
    if (all || a.stage == "detect") table.push_back({"detect", images.size(), seconds_since(t)});
  }
  if (all || a.stage == "dp") {
    auto t = std::chrono::steady_clock::now();
    size_t n = 0;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].lexicon.empty()) continue;
      (void)spot_word(CandidateSets(cands[i]), load_lexicon(resolve_path(a.annotations, rows[i].lexicon)),
                      rec.geometric(), rec.params());
      ++n;
    }
    table.push_back({"dp", n, seconds_since(t)});
  }
  std::cout << std::left << std::setw(10) << "stage" << std::right << std::setw(10) << "samples" << std::setw(14)
            << "mean_ms" << '\n';
  for (const auto& r : table)
    std::cout << std::left << std::setw(10) << r.stage << std::right << std::setw(10) << r.samples << std::setw(14)
              << std::fixed << std::setprecision(3) << (r.samples ? 1000.0 * r.total / r.samples : 0.0) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hscr: sparse-code features and lexicon-driven scene-text recognition"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file; subcommand keys as <subcommand>.<option>");
  int threads = 1;
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  LearnDictArgs ld;
  auto* c_ld = app.add_subcommand("learn-dict", "Learn a K-SVD patch dictionary from an image directory");
  c_ld->add_option("--corpus", ld.corpus, "Directory of grayscale images")->required()->check(CLI::ExistingDirectory);
  c_ld->add_option("--out", ld.out, "Dictionary file")->required();
  c_ld->add_option("--json", ld.json_out, "Also write a JSON export");
  c_ld->add_option("--patch-side", ld.patch_side, "Patch side in pixels")->check(CLI::Range(1, 64));
  c_ld->add_option("--atoms", ld.atoms, "Dictionary size k")->check(CLI::PositiveNumber);
  c_ld->add_option("--sparsity", ld.sparsity, "OMP sparsity T0")->check(CLI::PositiveNumber);
  c_ld->add_option("--iters", ld.iterations, "K-SVD iterations")->check(CLI::PositiveNumber);
  c_ld->add_option("--per-image", ld.per_image, "Patches sampled per image")->check(CLI::PositiveNumber);
  c_ld->add_option("--seed", ld.seed, "Random seed");

  SynthArgs sy;
  auto* c_sy = app.add_subcommand("synth", "Generate the seeded synthetic character and word corpus");
  c_sy->add_option("--out", sy.out, "Output directory")->required();
  c_sy->add_option("--classes", sy.cfg.classes, "Character classes in use (first N labels)")->check(CLI::Range(1, 62));
  c_sy->add_option("--samples", sy.cfg.samples_per_class, "Training crops per class")->check(CLI::NonNegativeNumber);
  c_sy->add_option("--test-samples", sy.cfg.test_per_class, "Test crops per class")->check(CLI::NonNegativeNumber);
  c_sy->add_option("--background-ratio", sy.cfg.background_ratio, "Background crops per character crop")
      ->check(CLI::NonNegativeNumber);
  c_sy->add_option("--fonts", sy.cfg.fonts, "Font faces in use")->check(CLI::Range(1, 8));
  c_sy->add_option("--noise", sy.cfg.noise, "Gaussian noise sigma")->check(CLI::NonNegativeNumber);
  c_sy->add_option("--clutter", sy.cfg.clutter, "Clutter probability")->check(CLI::Range(0.0, 1.0));
  c_sy->add_option("--words", sy.cfg.train_words, "Training word images")->check(CLI::NonNegativeNumber);
  c_sy->add_option("--test-words", sy.cfg.test_words, "Test word images")->check(CLI::NonNegativeNumber);
  c_sy->add_option("--lexicon-size", sy.cfg.lexicon_size, "Words per lexicon")->check(CLI::PositiveNumber);
  c_sy->add_option("--seed", sy.cfg.seed, "Random seed");

  TrainArgs tr;
  auto* c_tr = app.add_subcommand("train", "Train a 63-class character classifier");
  c_tr->add_option("--features", tr.features, "hsc or hog")->check(CLI::IsMember({"hsc", "hog"}));
  c_tr->add_option("--classifier", tr.classifier, "svm, sc or ferns")->check(CLI::IsMember({"svm", "sc", "ferns"}));
  c_tr->add_option("--train", tr.train, "Training character list (JSONL)")->required()->check(CLI::ExistingFile);
  c_tr->add_option("--test", tr.test, "Held-out character list (JSONL)")->check(CLI::ExistingFile);
  c_tr->add_option("--dict", tr.dict, "Dictionary file (HSC)")->check(CLI::ExistingFile);
  c_tr->add_option("--out", tr.out, "Model file")->required();
  c_tr->add_option("--dump-features", tr.dump, "Write the training feature matrix");
  c_tr->add_option("--pixel-sparsity", tr.pixel_sparsity, "Per-pixel OMP sparsity")->check(CLI::Range(1, 8));
  c_tr->add_option("--sigma", tr.sigma, "Box-Cox exponent")->check(CLI::Range(1e-6, 1.0));
  c_tr->add_option("--C", tr.svm.C, "SVM regularization")->check(CLI::PositiveNumber);
  c_tr->add_option("--tolerance", tr.svm.tolerance, "SVM stopping tolerance")->check(CLI::PositiveNumber);
  c_tr->add_option("--max-epochs", tr.svm.max_epochs, "SVM epoch limit")->check(CLI::PositiveNumber);
  c_tr->add_option("--sc-basis", tr.sc.basis, "Atoms per class dictionary")->check(CLI::PositiveNumber);
  c_tr->add_option("--sc-sparsity", tr.sc.sparsity, "SC coding sparsity")->check(CLI::PositiveNumber);
  c_tr->add_option("--sc-iters", tr.sc.iterations, "SC K-SVD iterations")->check(CLI::PositiveNumber);
  c_tr->add_option("--ferns", tr.ferns.ferns, "Number of ferns")->check(CLI::PositiveNumber);
  c_tr->add_option("--depth", tr.ferns.depth, "Tests per fern")->check(CLI::Range(1, 20));
  c_tr->add_option("--seed", tr.seed, "Random seed");

  TrainGeomArgs tg;
  auto* c_tg = app.add_subcommand("train-geom", "Train the pairwise geometric model from annotated words");
  c_tg->add_option("--annotations", tg.annotations, "Word annotations with boxes")->required()->check(CLI::ExistingFile);
  c_tg->add_option("--out", tg.out, "Geometric model JSON")->required();
  c_tg->add_option("--C", tg.C, "SVM regularization")->check(CLI::PositiveNumber);
  c_tg->add_option("--seed", tg.seed, "Random seed");

  MceArgs mc;
  auto* c_mc = app.add_subcommand("mce-train", "Learn lambda1, lambda2 by MCE training");
  c_mc->add_option("--annotations", mc.annotations, "Word annotations with boxes and lexicons")
      ->check(CLI::ExistingFile);
  c_mc->add_option("--out", mc.out, "Params JSON")->required();
  c_mc->add_option("--trace", mc.trace, "Loss trace CSV");
  c_mc->add_option("--model", mc.pipeline.model, "Character classifier file")->check(CLI::ExistingFile);
  c_mc->add_option("--dict", mc.pipeline.extractor.dict, "Dictionary file (HSC)")->check(CLI::ExistingFile);
  c_mc->add_option("--geom", mc.pipeline.geom, "Geometric model JSON")->check(CLI::ExistingFile);
  c_mc->add_option("--nms", mc.pipeline.nms_mode, "Suppression mode")->check(CLI::IsMember({"per-label", "global"}));
  c_mc->add_option("--lambda1", mc.init.lambda1, "Initial lambda1 (> 0)");
  c_mc->add_option("--lambda2", mc.init.lambda2, "Initial lambda2 (< 0)");
  c_mc->add_option("--xi", mc.cfg.xi, "Sigmoid hardness")->check(CLI::PositiveNumber);
  c_mc->add_option("--lr", mc.cfg.learning_rate, "Initial learning rate")->check(CLI::NonNegativeNumber);
  c_mc->add_option("--decay", mc.cfg.decay, "Learning-rate decay constant, 0 for the dataset size")
      ->check(CLI::NonNegativeNumber);
  c_mc->add_option("--epochs", mc.cfg.epochs, "Epochs")->check(CLI::NonNegativeNumber);
  c_mc->add_option("--seed", mc.cfg.seed, "Shuffling seed");
  c_mc->add_option("--planted", mc.planted, "Train on N planted-parameter synthetic samples instead");
  c_mc->add_option("--planted-seed", mc.planted_seed, "Seed of the planted set");

  RecognizeArgs rc;
  auto* c_rc = app.add_subcommand("recognize", "Recognize one cropped word image against a lexicon");
  c_rc->add_option("--image", rc.image, "Word image")->required()->check(CLI::ExistingFile);
  c_rc->add_option("--lexicon", rc.lexicon, "Lexicon file")->required()->check(CLI::ExistingFile);
  c_rc->add_option("--dump-candidates", rc.dump, "Write surviving candidates as JSONL");
  rc.pipeline.add(c_rc);

  EvalArgs ev;
  auto* c_ev = app.add_subcommand("eval", "Evaluate word recognition on an annotation file");
  c_ev->add_option("--annotations", ev.annotations, "Word annotations")->required()->check(CLI::ExistingFile);
  c_ev->add_option("--lexicon", ev.lexicon, "Lexicon for annotations without one")->check(CLI::ExistingFile);
  c_ev->add_option("--out-dir", ev.out_dir, "Directory for report.json and records.csv");
  ev.pipeline.add(c_ev);

  BenchArgs bn;
  auto* c_bn = app.add_subcommand("bench", "Time features, classification, detection and DP search");
  c_bn->add_option("--annotations", bn.annotations, "Word annotations")->required()->check(CLI::ExistingFile);
  c_bn->add_option("--stage", bn.stage, "Stage to time")
      ->check(CLI::IsMember({"all", "features", "classify", "detect", "dp"}));
  c_bn->add_option("--limit", bn.limit, "Images to time")->check(CLI::PositiveNumber);
  bn.pipeline.add(c_bn);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (c_ld->parsed()) return cmd_learn_dict(ld, threads);
    if (c_sy->parsed()) return cmd_synth(sy, threads);
    if (c_tr->parsed()) return cmd_train(tr, threads);
    if (c_tg->parsed()) return cmd_train_geom(tg, threads);
    if (c_mc->parsed()) return cmd_mce_train(mc, threads);
    if (c_rc->parsed()) return cmd_recognize(rc, threads);
    if (c_ev->parsed()) return cmd_eval(ev, threads);
    if (c_bn->parsed()) return cmd_bench(bn, threads);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

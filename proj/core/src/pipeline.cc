// core/src/pipeline.cc

// Copyright 2026 The tonequant Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "tonequant/pipeline.h"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "binary_io.h"
#include "tonequant/report_io.h"

#ifndef TONEQUANT_VERSION
#define TONEQUANT_VERSION "unknown"
#endif

namespace tonequant {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

// Strict reader over one JSON object: every key must be consumed.
class Section {
 public:
  Section(const Json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw InvalidArgument(fmt::format("{}: expected an object", where()));
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  Section child(const std::string& key) {
    seen_.insert(key);
    static const Json kEmpty = Json::object();
    return Section(node_.contains(key) ? node_.at(key) : kEmpty, field(key));
  }

  void read(const std::string& key, int& out) {
    if (const Json* v = take(key)) {
      if (!v->is_number_integer()) throw type_error(key, "an integer");
      const auto x = v->get<std::int64_t>();
      if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
        throw InvalidArgument(fmt::format("{}: out of range", field(key)));
      out = static_cast<int>(x);
    }
  }
  void read(const std::string& key, std::uint64_t& out) {
    if (const Json* v = take(key)) {
      if (!v->is_number_unsigned()) throw type_error(key, "a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }
  void read(const std::string& key, double& out) {
    if (const Json* v = take(key)) {
      if (!v->is_number()) throw type_error(key, "a number");
      out = v->get<double>();
    }
  }
  void read(const std::string& key, bool& out) {
    if (const Json* v = take(key)) {
      if (!v->is_boolean()) throw type_error(key, "a boolean");
      out = v->get<bool>();
    }
  }
  void read(const std::string& key, std::string& out) {
    if (const Json* v = take(key)) {
      if (!v->is_string()) throw type_error(key, "a string");
      out = v->get<std::string>();
    }
  }
  std::optional<std::vector<std::string>> read_strings(const std::string& key) {
    const Json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_array()) throw type_error(key, "an array of strings");
    std::vector<std::string> out;
    for (const Json& e : *v) {
      if (!e.is_string()) throw type_error(key, "an array of strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }

  void finish() const {
    for (const auto& item : node_.items())
      if (!seen_.count(item.key()))
        throw InvalidArgument(fmt::format("{}: unknown key", field(item.key())));
  }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  std::string where() const { return path_.empty() ? "config" : path_; }
  const Json* take(const std::string& key) {
    seen_.insert(key);
    if (!node_.contains(key) || node_.at(key).is_null()) return nullptr;
    return &node_.at(key);
  }
  InvalidArgument type_error(const std::string& key, const char* expected) const {
    return InvalidArgument(fmt::format("{}: expected {}", field(key), expected));
  }

  const Json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

// Runs a validator and prefixes its message with the section path.
template <typename Fn>
void validate_section(const std::string& path, Fn&& fn) {
  try {
    fn();
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(fmt::format("{}: {}", path, e.what()));
  }
}

void read_train(Section s, TrainConfig& t, std::uint64_t default_seed) {
  t.seed = default_seed;
  s.read("epochs", t.epochs);
  s.read("learning_rate", t.learning_rate);
  s.read("batch_size", t.batch_size);
  s.read("seed", t.seed);
  s.read("hidden_size", t.hidden_size);
  s.read("embed_dim", t.embed_dim);
  s.read("clip_norm", t.clip_norm);
  s.read("l2", t.l2);
  std::string input = t.symbol_input == SymbolInput::kOneHot ? "one-hot" : "embedding";
  s.read("symbol_input", input);
  if (input == "embedding") t.symbol_input = SymbolInput::kEmbedding;
  else if (input == "one-hot") t.symbol_input = SymbolInput::kOneHot;
  else throw InvalidArgument(fmt::format("{}: expected \"embedding\" or \"one-hot\"",
                                         s.field("symbol_input")));
  s.finish();
}

Json train_json(const TrainConfig& t) {
  return Json{{"epochs", t.epochs},
              {"learning_rate", t.learning_rate},
              {"batch_size", t.batch_size},
              {"seed", t.seed},
              {"hidden_size", t.hidden_size},
              {"embed_dim", t.embed_dim},
              {"clip_norm", t.clip_norm},
              {"l2", t.l2},
              {"symbol_input", t.symbol_input == SymbolInput::kOneHot ? "one-hot" : "embedding"}};
}

std::string language_key(Language language) {
  return language == Language::kMandarin ? "mandarin" : "yoruba";
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

PipelineConfig parse_pipeline_config(std::string_view json_text, const fs::path& base_dir,
                                     const ConfigOverrides& overrides) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(fmt::format("config: not valid JSON ({})", e.what()));
  }
  PipelineConfig c;
  Section root(doc, "");

  std::string language = language_key(c.language);
  root.read("language", language);
  try {
    c.language = LabelScheme::from_name(language).language();
  } catch (const Error&) {
    throw InvalidArgument(fmt::format("language: expected \"mandarin\" or \"yoruba\", got \"{}\"",
                                      language));
  }
  root.read("seed", c.seed);
  root.read("threads", c.threads);
  if (overrides.seed) c.seed = *overrides.seed;
  if (overrides.threads) c.threads = *overrides.threads;
  if (c.threads < 1) throw InvalidArgument("threads: must be at least 1");

  {
    Section s = root.child("corpus");
    std::string source = "synth";
    s.read("source", source);
    std::string manifest, alignments;
    s.read("manifest", manifest);
    s.read("alignments", alignments);
    s.read("frame_hop", c.frame_hop);
    s.finish();
    if (source == "synth") {
      c.source = CorpusSource::kSynth;
    } else if (source == "files") {
      c.source = CorpusSource::kFiles;
      if (manifest.empty())
        throw InvalidArgument("corpus.manifest: required when corpus.source is \"files\"");
      if (alignments.empty())
        throw InvalidArgument("corpus.alignments: required when corpus.source is \"files\"");
      c.manifest = resolve(base_dir, manifest);
      c.alignments = resolve(base_dir, alignments);
    } else {
      throw InvalidArgument("corpus.source: expected \"synth\" or \"files\"");
    }
    if (!(c.frame_hop > 0.0)) throw InvalidArgument("corpus.frame_hop: must be positive");
  }
  {
    Section s = root.child("synth");
    SynthConfig& y = c.synth;
    y.seed = c.seed;
    s.read("dim", y.dim);
    s.read("phones", y.phones);
    s.read("phones_per_utterance", y.phones_per_utterance);
    s.read("phone_amplitude", y.phone_amplitude);
    s.read("tone_amplitude", y.tone_amplitude);
    s.read("noise_sigma", y.noise_sigma);
    s.read("min_duration", y.min_duration);
    s.read("max_duration", y.max_duration);
    s.read("seed", y.seed);
    s.finish();
    y.language = c.language;
    y.frame_hop = c.frame_hop;
    if (c.source == CorpusSource::kSynth) validate_section("synth", [&] { y.validate(); });
  }
  {
    Section s = root.child("kmeans");
    KMeansConfig& k = c.kmeans;
    k.seed = c.seed;
    s.read("k", k.k);
    s.read("max_iterations", k.max_iterations);
    s.read("rel_tolerance", k.rel_tolerance);
    s.read("n_init", k.n_init);
    s.read("max_frames", k.max_frames);
    s.read("seed", k.seed);
    s.finish();
    if (k.k < 1) throw InvalidArgument("kmeans.k: must be at least 1");
    if (k.max_iterations < 1) throw InvalidArgument("kmeans.max_iterations: must be at least 1");
    if (!(k.rel_tolerance >= 0.0)) throw InvalidArgument("kmeans.rel_tolerance: must be >= 0");
    if (k.n_init < 1) throw InvalidArgument("kmeans.n_init: must be at least 1");
  }
  {
    Section s = root.child("represent");
    c.split_seed = c.seed;
    s.read("dedup_symbols", c.dedup_symbols);
    s.read("split_seed", c.split_seed);
    s.read("export_datasets", c.export_datasets);
    s.finish();
  }
  {
    Section s = root.child("probes");
    ProbeSuiteConfig& p = c.probes;
    if (auto tasks = s.read_strings("tasks")) {
      p.tasks.clear();
      for (const auto& t : *tasks) {
        try {
          p.tasks.push_back(task_from_name(t));
        } catch (const InvalidArgument&) {
          throw InvalidArgument(fmt::format("probes.tasks: unknown task \"{}\"", t));
        }
      }
    }
    if (auto reps = s.read_strings("representations")) {
      p.representations.clear();
      for (const auto& r : *reps) {
        try {
          p.representations.push_back(representation_from_name(r));
        } catch (const InvalidArgument&) {
          throw InvalidArgument(fmt::format("probes.representations: unknown representation \"{}\"", r));
        }
      }
    }
    read_train(s.child("lstm_latents"), p.lstm_latents, c.seed);
    read_train(s.child("lstm_symbols"), p.lstm_symbols, c.seed);
    read_train(s.child("logreg"), p.logreg, c.seed);
    s.finish();
    validate_section("probes.lstm_latents", [&] { p.lstm_latents.validate(); });
    validate_section("probes.lstm_symbols", [&] { p.lstm_symbols.validate(); });
    validate_section("probes.logreg", [&] { p.logreg.validate(); });
    p.threads = c.threads;
  }
  {
    Section s = root.child("editdist");
    c.pairs.seed = c.seed;
    s.read("enabled", c.editdist_enabled);
    s.read("max_pairs_per_cell", c.pairs.max_pairs_per_cell);
    s.read("include_self_pairs", c.pairs.include_self_pairs);
    s.read("seed", c.pairs.seed);
    s.read("heatmap_normalized", c.heatmap_normalized);
    s.read("cell_size", c.heatmap.cell_size);
    s.finish();
    if (c.pairs.max_pairs_per_cell < 1)
      throw InvalidArgument("editdist.max_pairs_per_cell: must be at least 1");
    if (c.heatmap.cell_size < 1) throw InvalidArgument("editdist.cell_size: must be at least 1");
  }
  root.finish();
  return c;
}

PipelineConfig load_pipeline_config(const fs::path& path, const ConfigOverrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument(fmt::format("config: cannot open {}", path.string()));
  std::stringstream text;
  text << in.rdbuf();
  return parse_pipeline_config(text.str(), path.parent_path(), overrides);
}

std::string pipeline_config_json(const PipelineConfig& c) {
  Json doc;
  doc["language"] = language_key(c.language);
  doc["seed"] = c.seed;
  doc["threads"] = c.threads;
  doc["corpus"] = {{"source", c.source == CorpusSource::kSynth ? "synth" : "files"},
                   {"manifest", c.manifest.empty() ? "" : fs::absolute(c.manifest).string()},
                   {"alignments", c.alignments.empty() ? "" : fs::absolute(c.alignments).string()},
                   {"frame_hop", c.frame_hop}};
  doc["synth"] = {{"dim", c.synth.dim},
                  {"phones", c.synth.phones},
                  {"phones_per_utterance", c.synth.phones_per_utterance},
                  {"phone_amplitude", c.synth.phone_amplitude},
                  {"tone_amplitude", c.synth.tone_amplitude},
                  {"noise_sigma", c.synth.noise_sigma},
                  {"min_duration", c.synth.min_duration},
                  {"max_duration", c.synth.max_duration},
                  {"seed", c.synth.seed}};
  doc["kmeans"] = {{"k", c.kmeans.k},
                   {"max_iterations", c.kmeans.max_iterations},
                   {"rel_tolerance", c.kmeans.rel_tolerance},
                   {"n_init", c.kmeans.n_init},
                   {"max_frames", c.kmeans.max_frames},
                   {"seed", c.kmeans.seed}};
  doc["represent"] = {{"dedup_symbols", c.dedup_symbols},
                      {"split_seed", c.split_seed},
                      {"export_datasets", c.export_datasets}};
  Json tasks = Json::array(), reps = Json::array();
  for (TaskKind t : c.probes.tasks) tasks.push_back(std::string(task_name(t)));
  for (Representation r : c.probes.representations)
    reps.push_back(std::string(representation_name(r)));
  doc["probes"] = {{"tasks", tasks},
                   {"representations", reps},
                   {"lstm_latents", train_json(c.probes.lstm_latents)},
                   {"lstm_symbols", train_json(c.probes.lstm_symbols)},
                   {"logreg", train_json(c.probes.logreg)}};
  doc["editdist"] = {{"enabled", c.editdist_enabled},
                     {"max_pairs_per_cell", c.pairs.max_pairs_per_cell},
                     {"include_self_pairs", c.pairs.include_self_pairs},
                     {"seed", c.pairs.seed},
                     {"heatmap_normalized", c.heatmap_normalized},
                     {"cell_size", c.heatmap.cell_size}};
  return doc.dump(2) + "\n";
}

std::string_view target_name(PipelineTarget target) {
  switch (target) {
    case PipelineTarget::kCorpus: return "corpus";
    case PipelineTarget::kCodebook: return "codebook";
    case PipelineTarget::kDatasets: return "datasets";
    case PipelineTarget::kClassify: return "classify";
    case PipelineTarget::kEditDistance: return "editdist";
    case PipelineTarget::kFull: return "full";
  }
  return "unknown";
}

PipelineError::PipelineError(std::string stage, const std::string& cause)
    : Error(fmt::format("stage '{}' failed: {}", stage, cause)), stage_(std::move(stage)) {}

FrameMatrix pool_frames(const std::vector<UtteranceFeatures>& features) {
  Eigen::Index rows = 0, dim = -1;
  for (const auto& u : features) {
    if (dim >= 0 && u.frames.cols() != dim)
      throw InvalidArgument(fmt::format("utterance {} has dimension {}, expected {}",
                                        u.utterance_id, u.frames.cols(), dim));
    dim = u.frames.cols();
    rows += u.frames.rows();
  }
  if (rows == 0) throw InvalidArgument("no frames to pool");
  FrameMatrix pooled(rows, dim);
  Eigen::Index at = 0;
  for (const auto& u : features) {
    pooled.middleRows(at, u.frames.rows()) = u.frames;
    at += u.frames.rows();
  }
  return pooled;
}

PipelineResult run_pipeline(const PipelineConfig& config, const fs::path& out_dir,
                            PipelineTarget target) {
  fs::create_directories(out_dir);
  const fs::path marker = out_dir / "INCOMPLETE";
  const LabelScheme& scheme = LabelScheme::for_language(config.language);
  PipelineResult result;
  std::vector<UtteranceFeatures> features;

  auto emit = [&](const fs::path& rel, const std::string& text) {
    fs::create_directories((out_dir / rel).parent_path());
    write_text(out_dir / rel, text);
    result.outputs.push_back(rel.generic_string());
  };
  auto stage = [&](const std::string& name, auto&& fn) {
    write_text(marker, fmt::format("running stage {}\n", name));
    try {
      fn();
    } catch (const std::exception& e) {
      try {
        write_text(marker, fmt::format("failed at stage {}: {}\n", name, e.what()));
      } catch (...) {
      }
      throw PipelineError(name, e.what());
    }
  };
  auto reaches = [&](PipelineTarget t) { return static_cast<int>(target) >= static_cast<int>(t); };

  stage("corpus", [&] {
    fs::path manifest = config.manifest, alignments = config.alignments;
    if (config.source == CorpusSource::kSynth) {
      const SynthOutput written =
          write_corpus(generate_corpus(config.synth, config.threads), config.synth, out_dir / "corpus");
      manifest = written.manifest;
      alignments = written.alignments;
      for (const fs::path& p : {written.manifest, written.alignments, written.provenance})
        result.outputs.push_back(fs::relative(p, out_dir).generic_string());
    } else {
      if (!fs::exists(manifest))
        throw InvalidArgument(fmt::format("corpus.manifest: file not found: {}", manifest.string()));
      if (!fs::exists(alignments))
        throw InvalidArgument(
            fmt::format("corpus.alignments: file not found: {}", alignments.string()));
    }
    features = load_corpus_features(manifest, config.frame_hop);
    result.utterances = features.size();
    result.segmentation = build_segments(features, load_alignments(alignments, scheme), scheme);
  });

  if (reaches(PipelineTarget::kCodebook)) {
    stage("kmeans", [&] {
      result.codebook = kmeans_fit(pool_frames(features), config.kmeans, config.threads);
      save_codebook(out_dir / "codebook.sslk", result.codebook);
      result.outputs.push_back("codebook.sslk");
    });
  }

  if (reaches(PipelineTarget::kDatasets)) {
    stage("represent", [&] {
      RepresentationOptions options{config.dedup_symbols, config.threads};
      auto items = std::make_shared<const std::vector<PhoneRepresentation>>(build_representations(
          result.segmentation.segments, features, result.codebook, options));
      for (TaskKind task : kAllTasks) {
        if (std::find(config.probes.tasks.begin(), config.probes.tasks.end(), task) ==
            config.probes.tasks.end())
          continue;
        result.datasets.push_back(
            make_dataset(items, result.segmentation.segments, scheme, task, config.split_seed));
        if (config.export_datasets) {
          const std::string stem = fmt::format("datasets/{}", task_name(task));
          fs::create_directories(out_dir / "datasets");
          export_dataset(result.datasets.back(), result.segmentation.segments,
                         out_dir / (stem + ".csv"), out_dir / (stem + ".avg.sslf"));
          result.outputs.push_back(stem + ".csv");
          result.outputs.push_back(stem + ".avg.sslf");
        }
      }
    });
  }

  if (target == PipelineTarget::kClassify || target == PipelineTarget::kFull) {
    stage("classify", [&] {
      result.probes = run_probe_suite(result.datasets, result.codebook.k(), config.probes);
      emit("f1_per_class.csv", per_class_csv(*result.probes));
      emit("f1_summary.csv", summary_csv(*result.probes));
      emit("f1_reference.csv", reference_comparison_csv(*result.probes, config.language));
    });
  }

  if ((target == PipelineTarget::kEditDistance || target == PipelineTarget::kFull) &&
      config.editdist_enabled) {
    stage("editdist", [&] {
      fs::create_directories(out_dir / "distance");
      fs::create_directories(out_dir / "heatmaps");
      std::string contrast_csv = "task,raw,normalized\n";
      for (const ProbeDataset& dataset : result.datasets) {
        const std::string name(task_name(dataset.task));
        DistanceMatrix raw = pairwise_class_distance(dataset, config.pairs, false, config.threads);
        DistanceMatrix norm = pairwise_class_distance(dataset, config.pairs, true, config.threads);
        std::string row = name;
        for (const DistanceMatrix* m : {&raw, &norm}) {
          const std::string stem = fmt::format("distance/{}.{}", name, m->normalized ? "normalized" : "raw");
          write_distance_csv(*m, out_dir / (stem + ".csv"));
          write_distance_metadata(*m, out_dir / (stem + ".json"));
          result.outputs.push_back(stem + ".csv");
          result.outputs.push_back(stem + ".json");
          std::string value = "NA";
          if (m->size() >= 2 && !m->any_flagged()) {
            try {
              value = fmt::format("{:.6f}", diagonal_contrast(*m));
            } catch (const InvalidArgument&) {
            }
          }
          row += "," + value;
        }
        contrast_csv += row + "\n";

        const DistanceMatrix& shown = config.heatmap_normalized ? norm : raw;
        if (!shown.any_flagged()) {
          const std::string pgm = fmt::format("heatmaps/{}.pgm", name);
          render_heatmap(shown, out_dir / pgm, config.heatmap);
          result.outputs.push_back(pgm);
          result.outputs.push_back(pgm + ".legend.txt");
          if (shown.size() >= 2) {
            try {
              result.contrast[dataset.task] = diagonal_contrast(shown);
            } catch (const InvalidArgument&) {
            }
          }
        }
        result.raw_distances.emplace(dataset.task, std::move(raw));
        result.normalized_distances.emplace(dataset.task, std::move(norm));
      }
      emit("distance/contrast.csv", contrast_csv);
    });
  }

  stage("provenance", [&] {
    emit("config.resolved.json", pipeline_config_json(config));
    Json prov;
    prov["tool"] = "tonequant";
    prov["version"] = TONEQUANT_VERSION;
    prov["target"] = std::string(target_name(target));
    prov["config"] = Json::parse(pipeline_config_json(config));
    prov["corpus"] = {{"utterances", result.utterances},
                      {"segments", result.segmentation.segments.size()},
                      {"dropped_non_vowel", result.segmentation.dropped_non_vowel},
                      {"dropped_toneless", result.segmentation.dropped_toneless},
                      {"dropped_no_frames", result.segmentation.dropped_no_frames}};
    if (reaches(PipelineTarget::kCodebook))
      prov["codebook"] = {{"k", result.codebook.k()},
                          {"dim", result.codebook.dim()},
                          {"inertia", result.codebook.inertia},
                          {"iterations_run", result.codebook.iterations_run}};
    Json datasets = Json::array();
    for (const ProbeDataset& d : result.datasets)
      datasets.push_back({{"task", std::string(task_name(d.task))},
                          {"classes", d.classes},
                          {"train_counts", d.train_counts},
                          {"test_counts", d.test_counts}});
    prov["datasets"] = datasets;
    prov["outputs"] = result.outputs;
    prov["rerun"] = "tonequant run --config config.resolved.json --out <dir>";
    emit("provenance.json", prov.dump(2) + "\n");
  });

  fs::remove(marker);
  return result;
}

}  // namespace tonequant

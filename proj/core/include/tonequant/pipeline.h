// tonequant/pipeline.h

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

#ifndef TONEQUANT_PIPELINE_H_
#define TONEQUANT_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tonequant/editdist.h"
#include "tonequant/heatmap.h"
#include "tonequant/probe_suite.h"
#include "tonequant/quantize.h"
#include "tonequant/synth.h"

namespace tonequant {

enum class CorpusSource { kSynth, kFiles };

/// Every knob of an end-to-end run. Loaded from a JSON document whose keys
/// mirror these fields; see configs/demo.json.
struct PipelineConfig {
  Language language = Language::kMandarin;
  std::uint64_t seed = 42;
  int threads = 1;

  CorpusSource source = CorpusSource::kSynth;
  std::filesystem::path manifest;    // kFiles only
  std::filesystem::path alignments;  // kFiles only
  double frame_hop = kDefaultFrameHop;

  SynthConfig synth;
  KMeansConfig kmeans;
  bool dedup_symbols = false;
  std::uint64_t split_seed = 42;
  ProbeSuiteConfig probes;

  bool editdist_enabled = true;
  PairSamplingConfig pairs;
  bool heatmap_normalized = true;
  HeatmapSpec heatmap;

  bool export_datasets = true;
};

/// Command-line values that take precedence over the document.
struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

/// Parses a config document. Unknown keys, wrong types and invalid values
/// throw InvalidArgument naming the dotted field path. Section seeds default
/// to the top-level seed; relative paths resolve against `base_dir`.
PipelineConfig parse_pipeline_config(std::string_view json_text,
                                     const std::filesystem::path& base_dir = {},
                                     const ConfigOverrides& overrides = {});
PipelineConfig load_pipeline_config(const std::filesystem::path& path,
                                    const ConfigOverrides& overrides = {});

/// Fully resolved document (every field explicit); parses back to the same
/// config.
std::string pipeline_config_json(const PipelineConfig& config);

/// How far a run goes. Each target includes the stages before it, except
/// that kClassify skips the edit-distance stage and kEditDistance skips the
/// classification probes.
enum class PipelineTarget { kCorpus, kCodebook, kDatasets, kClassify, kEditDistance, kFull };

std::string_view target_name(PipelineTarget target);

/// A stage failure: `stage()` names the stage, what() carries the cause.
class PipelineError : public Error {
 public:
  PipelineError(std::string stage, const std::string& cause);
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct PipelineResult {
  std::size_t utterances = 0;
  SegmentationResult segmentation;
  Codebook codebook;
  std::vector<ProbeDataset> datasets;
  std::optional<ProbeTable> probes;
  std::map<TaskKind, DistanceMatrix> raw_distances;
  std::map<TaskKind, DistanceMatrix> normalized_distances;
  std::map<TaskKind, double> contrast;  // of the heatmap matrices
  std::vector<std::string> outputs;     // files written, relative to out_dir
};

/// Pools every frame of every utterance into one matrix (all phones, not
/// only vowels).
FrameMatrix pool_frames(const std::vector<UtteranceFeatures>& features);

/// Runs synth-or-load, k-means, representation, probes, edit distances and
/// reports into `out_dir`. While running, and after a failure, `out_dir`
/// holds an INCOMPLETE file naming the stage; a finished run removes it and
/// writes provenance.json plus config.resolved.json.
PipelineResult run_pipeline(const PipelineConfig& config, const std::filesystem::path& out_dir,
                            PipelineTarget target = PipelineTarget::kFull);

}  // namespace tonequant

#endif  // TONEQUANT_PIPELINE_H_

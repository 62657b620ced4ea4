// tonequant/represent.h

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

#ifndef TONEQUANT_REPRESENT_H_
#define TONEQUANT_REPRESENT_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tonequant/common.h"
#include "tonequant/corpus.h"
#include "tonequant/quantize.h"

namespace tonequant {

/// Column-wise mean of a phone's frames, accumulated in double.
Eigen::VectorXd average_latents(const Eigen::Ref<const FrameMatrix>& latent_seq);

/// Symbols of the segment's frames, one per frame (no run-length merging).
std::vector<int> symbolize_segment(const PhoneSegment& segment, const Codebook& codebook,
                                   const UtteranceFeatures& features);

/// Collapses runs of repeated symbols: (3,3,5,5,5,3) -> (3,5,3).
std::vector<int> dedup_runs(const std::vector<int>& symbols);

/// Which view of a phone a probe consumes.
enum class Representation { kLatents, kAveragedLatents, kDiscreteSymbols };

inline constexpr Representation kAllRepresentations[] = {
    Representation::kLatents, Representation::kAveragedLatents,
    Representation::kDiscreteSymbols};

/// "Latents", "AveragedLatents", "DiscreteSymbols".
std::string_view representation_name(Representation representation);
Representation representation_from_name(std::string_view name);

/// The three views of one phone occurrence.
struct PhoneRepresentation {
  std::size_t segment_index = 0;
  FrameMatrix latent_seq;       // L x D
  Eigen::VectorXd avg_latent;   // D
  std::vector<int> symbol_seq;  // L (or fewer when deduplicated)
};

struct RepresentationOptions {
  bool dedup_symbols = false;
  int threads = 1;
};

std::vector<PhoneRepresentation> build_representations(
    const std::vector<PhoneSegment>& segments,
    const std::vector<UtteranceFeatures>& features, const Codebook& codebook,
    const RepresentationOptions& options = {});

enum class Split : std::uint8_t { kTrain, kTest };

/// Labelled, split view over a shared set of phone representations. The three
/// tasks built from one corpus share the same representation store.
struct ProbeDataset {
  TaskKind task = TaskKind::kVowelWithoutTone;
  std::vector<std::string> classes;  // label vocabulary, inventory order
  std::shared_ptr<const std::vector<PhoneRepresentation>> items;
  std::vector<int> labels;    // per item, index into classes
  std::vector<Split> split;   // per item
  std::vector<std::size_t> train_counts;  // per class
  std::vector<std::size_t> test_counts;   // per class

  std::size_t size() const { return labels.size(); }
  int num_classes() const { return static_cast<int>(classes.size()); }
  std::vector<std::size_t> indices(Split which) const;
};

/// Labels every item for `task` and draws a class-stratified 80:20 split.
/// The vocabulary is the task inventory restricted to classes present in the
/// data; a present class with fewer than two items cannot be stratified and
/// is reported by name.
ProbeDataset make_dataset(std::shared_ptr<const std::vector<PhoneRepresentation>> items,
                          const std::vector<PhoneSegment>& segments,
                          const LabelScheme& scheme, TaskKind task,
                          std::uint64_t split_seed);

ProbeDataset build_dataset(const std::vector<PhoneSegment>& segments,
                           const std::vector<UtteranceFeatures>& features,
                           const Codebook& codebook, const LabelScheme& scheme,
                           TaskKind task, std::uint64_t split_seed,
                           const RepresentationOptions& options = {});

/// Writes `utt_id,frame_start,frame_end,vowel,tone,split,symbol_seq` records
/// plus an SSLF sidecar whose row i is the averaged latent of record i.
void export_dataset(const ProbeDataset& dataset, const std::vector<PhoneSegment>& segments,
                    const std::filesystem::path& records_csv,
                    const std::filesystem::path& averages_sslf);

}  // namespace tonequant

#endif  // TONEQUANT_REPRESENT_H_

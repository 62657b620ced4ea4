// core/src/represent.cc

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

#include "tonequant/represent.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include <fmt/format.h>

#include "tonequant/parallel.h"

namespace tonequant {

std::string_view representation_name(Representation representation) {
  switch (representation) {
    case Representation::kLatents: return "Latents";
    case Representation::kAveragedLatents: return "AveragedLatents";
    case Representation::kDiscreteSymbols: return "DiscreteSymbols";
  }
  return "unknown";
}

Representation representation_from_name(std::string_view name) {
  for (Representation r : kAllRepresentations)
    if (representation_name(r) == name) return r;
  throw InvalidArgument(fmt::format("unknown representation \"{}\"", name));
}

Eigen::VectorXd average_latents(const Eigen::Ref<const FrameMatrix>& latent_seq) {
  if (latent_seq.rows() == 0) throw InvalidArgument("cannot average an empty sequence");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(latent_seq.cols());
  for (Eigen::Index t = 0; t < latent_seq.rows(); ++t)
    sum += latent_seq.row(t).transpose().cast<double>();
  return sum / static_cast<double>(latent_seq.rows());
}

namespace {

void check_segment(const PhoneSegment& segment, const UtteranceFeatures& features) {
  if (segment.frame_end <= segment.frame_start || segment.frame_end > features.num_frames())
    throw InvalidArgument(fmt::format(
        "segment [{}, {}) of utterance {} is outside its {} frames", segment.frame_start,
        segment.frame_end, segment.utterance_id, features.num_frames()));
}

}  // namespace

std::vector<int> symbolize_segment(const PhoneSegment& segment, const Codebook& codebook,
                                   const UtteranceFeatures& features) {
  check_segment(segment, features);
  return assign_symbols(
      codebook, features.frames.middleRows(static_cast<Eigen::Index>(segment.frame_start),
                                           static_cast<Eigen::Index>(segment.length())));
}

std::vector<int> dedup_runs(const std::vector<int>& symbols) {
  std::vector<int> out;
  for (int s : symbols)
    if (out.empty() || out.back() != s) out.push_back(s);
  return out;
}

std::vector<PhoneRepresentation> build_representations(
    const std::vector<PhoneSegment>& segments,
    const std::vector<UtteranceFeatures>& features, const Codebook& codebook,
    const RepresentationOptions& options) {
  std::vector<PhoneRepresentation> out(segments.size());
  parallel_for(segments.size(), options.threads, [&](std::size_t i) {
    const PhoneSegment& seg = segments[i];
    if (seg.utterance_index >= features.size())
      throw InvalidArgument(fmt::format("segment {} references utterance index {}", i,
                                        seg.utterance_index));
    const UtteranceFeatures& utt = features[seg.utterance_index];
    check_segment(seg, utt);
    PhoneRepresentation& rep = out[i];
    rep.segment_index = i;
    rep.latent_seq = utt.frames.middleRows(static_cast<Eigen::Index>(seg.frame_start),
                                           static_cast<Eigen::Index>(seg.length()));
    rep.avg_latent = average_latents(rep.latent_seq);
    rep.symbol_seq = assign_symbols(codebook, rep.latent_seq);
    if (options.dedup_symbols) rep.symbol_seq = dedup_runs(rep.symbol_seq);
  });
  return out;
}

std::vector<std::size_t> ProbeDataset::indices(Split which) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < split.size(); ++i)
    if (split[i] == which) out.push_back(i);
  return out;
}

ProbeDataset make_dataset(std::shared_ptr<const std::vector<PhoneRepresentation>> items,
                          const std::vector<PhoneSegment>& segments,
                          const LabelScheme& scheme, TaskKind task,
                          std::uint64_t split_seed) {
  if (!items) throw InvalidArgument("dataset has no representation store");
  const auto inventory = task_classes(scheme, task);
  std::vector<std::vector<std::size_t>> members(inventory.size());
  for (std::size_t i = 0; i < items->size(); ++i) {
    const std::size_t seg_index = (*items)[i].segment_index;
    if (seg_index >= segments.size())
      throw InvalidArgument(fmt::format("item {} references segment {}", i, seg_index));
    const std::string label = task_label(segments[seg_index], scheme, task);
    const auto it = std::find(inventory.begin(), inventory.end(), label);
    if (it == inventory.end())
      throw InvalidArgument(fmt::format("label \"{}\" is not in the {} inventory for {}",
                                        label, scheme.name(), task_name(task)));
    members[static_cast<std::size_t>(it - inventory.begin())].push_back(i);
  }

  ProbeDataset ds;
  ds.task = task;
  ds.items = std::move(items);
  ds.labels.assign(ds.items->size(), -1);
  ds.split.assign(ds.items->size(), Split::kTrain);

  for (std::size_t c = 0; c < inventory.size(); ++c) {
    auto& group = members[c];
    if (group.empty()) continue;
    if (group.size() < 2)
      throw InvalidArgument(fmt::format(
          "class \"{}\" ({}) has {} item; at least 2 are needed for a stratified split",
          inventory[c], task_name(task), group.size()));
    const int label = ds.num_classes();
    ds.classes.push_back(inventory[c]);
    std::mt19937_64 rng(derive_seed(split_seed, c));
    std::shuffle(group.begin(), group.end(), rng);
    const auto n = static_cast<long long>(group.size());
    const long long n_test = std::clamp(std::llround(0.2 * static_cast<double>(n)), 1LL, n - 1);
    for (long long j = 0; j < n; ++j) {
      const std::size_t i = group[static_cast<std::size_t>(j)];
      ds.labels[i] = label;
      ds.split[i] = j < n_test ? Split::kTest : Split::kTrain;
    }
    ds.test_counts.push_back(static_cast<std::size_t>(n_test));
    ds.train_counts.push_back(static_cast<std::size_t>(n - n_test));
  }
  return ds;
}

ProbeDataset build_dataset(const std::vector<PhoneSegment>& segments,
                           const std::vector<UtteranceFeatures>& features,
                           const Codebook& codebook, const LabelScheme& scheme,
                           TaskKind task, std::uint64_t split_seed,
                           const RepresentationOptions& options) {
  auto items = std::make_shared<const std::vector<PhoneRepresentation>>(
      build_representations(segments, features, codebook, options));
  return make_dataset(std::move(items), segments, scheme, task, split_seed);
}

void export_dataset(const ProbeDataset& dataset, const std::vector<PhoneSegment>& segments,
                    const std::filesystem::path& records_csv,
                    const std::filesystem::path& averages_sslf) {
  std::ofstream out(records_csv, std::ios::trunc);
  if (!out) throw Error(fmt::format("{}: cannot open for writing", records_csv.string()));
  out << "utt_id,frame_start,frame_end,vowel,tone,split,symbol_seq\n";
  const auto& items = *dataset.items;
  if (items.empty()) return;
  FrameMatrix averages(static_cast<Eigen::Index>(items.size()), items.front().avg_latent.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    const PhoneRepresentation& rep = items[i];
    const PhoneSegment& seg = segments.at(rep.segment_index);
    out << fmt::format("{},{},{},{},{},{},{}\n", seg.utterance_id, seg.frame_start,
                       seg.frame_end, seg.vowel, seg.tone,
                       dataset.split[i] == Split::kTrain ? "train" : "test",
                       fmt::join(rep.symbol_seq, " "));
    averages.row(static_cast<Eigen::Index>(i)) = rep.avg_latent.transpose().cast<float>();
  }
  write_features(averages_sslf, averages);
}

}  // namespace tonequant

// tonequant/synth.h

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

#ifndef TONEQUANT_SYNTH_H_
#define TONEQUANT_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tonequant/corpus.h"

// Synthetic corpora with a planted vowel cue and a weaker tone cue.
//
// Frame t of a phone with vowel v, tone shape s and length L is
//   phone_amplitude * e_v
//   + tone_amplitude * (f_s(p) e_V + f_s'(p) / 2 e_{V+1})
//   + N(0, noise_sigma^2 I),         p = (t + 0.5) / L,
// where e_k are coordinate axes and V is the number of vowels. The tone
// lives in a two-dimensional subspace (pitch and its slope) disjoint from the
// vowel axes.

namespace tonequant {

enum class ToneShape { kHigh, kLow, kMid, kRising, kFalling, kDip };

/// Pitch value and slope of a tone shape at relative position p in [0, 1].
double tone_pitch(ToneShape shape, double p);
double tone_slope(ToneShape shape, double p);

/// Shape planted for each tone of a scheme. Mandarin 1..5: high, rising,
/// dip, falling, low. Yoruba H, L, Neutral: high, low, mid.
ToneShape tone_shape(const LabelScheme& scheme, std::string_view tone);

struct SynthConfig {
  Language language = Language::kMandarin;
  int dim = 64;
  int phones = 5000;
  int phones_per_utterance = 20;
  double phone_amplitude = 1.0;
  double tone_amplitude = 0.20;
  double noise_sigma = 0.40;
  int min_duration = 5;  // frames
  int max_duration = 10;
  double frame_hop = kDefaultFrameHop;
  std::uint64_t seed = 42;

  void validate() const;
};

struct SynthCorpus {
  std::vector<UtteranceFeatures> features;
  std::vector<AlignmentEntry> alignments;
};

/// Builds the corpus in memory. Utterance u draws from its own stream seeded
/// by (seed, u), so the result does not depend on `threads`.
SynthCorpus generate_corpus(const SynthConfig& config, int threads = 1);

struct SynthOutput {
  std::filesystem::path manifest;
  std::filesystem::path alignments;
  std::filesystem::path provenance;
};

/// Writes manifest.tsv, feats/<utt>.sslf, alignments.csv and provenance.json
/// under `dir`.
SynthOutput write_corpus(const SynthCorpus& corpus, const SynthConfig& config,
                         const std::filesystem::path& dir);

}  // namespace tonequant

#endif  // TONEQUANT_SYNTH_H_

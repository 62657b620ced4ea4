// core/src/synth.cc

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

#include "tonequant/synth.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include <fmt/format.h>
#include <json.hpp>

#include "tonequant/parallel.h"

namespace tonequant {

double tone_pitch(ToneShape shape, double p) {
  switch (shape) {
    case ToneShape::kHigh: return 1.0;
    case ToneShape::kLow: return -1.0;
    case ToneShape::kMid: return 0.0;
    case ToneShape::kRising: return 2.0 * p - 1.0;
    case ToneShape::kFalling: return 1.0 - 2.0 * p;
    case ToneShape::kDip: return 1.0 - 2.0 * std::sin(std::numbers::pi * p);
  }
  return 0.0;
}

double tone_slope(ToneShape shape, double p) {
  switch (shape) {
    case ToneShape::kHigh:
    case ToneShape::kLow:
    case ToneShape::kMid: return 0.0;
    case ToneShape::kRising: return 2.0;
    case ToneShape::kFalling: return -2.0;
    case ToneShape::kDip: return -2.0 * std::numbers::pi * std::cos(std::numbers::pi * p);
  }
  return 0.0;
}

ToneShape tone_shape(const LabelScheme& scheme, std::string_view tone) {
  const int t = scheme.tone_index(tone);
  if (t < 0) throw InvalidArgument(fmt::format("tone \"{}\" not in the {} scheme", tone, scheme.name()));
  if (scheme.language() == Language::kMandarin) {
    static constexpr ToneShape kMandarin[] = {ToneShape::kHigh, ToneShape::kRising,
                                              ToneShape::kDip, ToneShape::kFalling,
                                              ToneShape::kLow};
    return kMandarin[t];
  }
  static constexpr ToneShape kYoruba[] = {ToneShape::kHigh, ToneShape::kLow, ToneShape::kMid};
  return kYoruba[t];
}

void SynthConfig::validate() const {
  const auto& scheme = LabelScheme::for_language(language);
  const int needed = static_cast<int>(scheme.vowels().size()) + 2;
  if (dim < needed)
    throw InvalidArgument(fmt::format(
        "synth: dim {} cannot host {} vowel axes plus a 2-dimensional tone subspace", dim,
        needed - 2));
  if (phones < 1) throw InvalidArgument("synth: phones must be positive");
  if (phones_per_utterance < 1) throw InvalidArgument("synth: phones_per_utterance must be positive");
  if (min_duration < 1 || max_duration > 50 || min_duration > max_duration)
    throw InvalidArgument(fmt::format("synth: duration range [{}, {}] must lie within [1, 50]",
                                      min_duration, max_duration));
  if (!(tone_amplitude >= 0.0) || !(tone_amplitude < phone_amplitude))
    throw InvalidArgument("synth: need 0 <= tone_amplitude < phone_amplitude");
  if (!(noise_sigma >= 0.0)) throw InvalidArgument("synth: noise_sigma must be non-negative");
  if (!(frame_hop > 0.0)) throw InvalidArgument("synth: frame_hop must be positive");
}

SynthCorpus generate_corpus(const SynthConfig& config, int threads) {
  config.validate();
  const LabelScheme& scheme = LabelScheme::for_language(config.language);
  const int vowels = static_cast<int>(scheme.vowels().size());
  const int tones = static_cast<int>(scheme.tones().size());
  const int utterances = (config.phones + config.phones_per_utterance - 1) / config.phones_per_utterance;
  const int digits = static_cast<int>(std::to_string(utterances - 1).size());

  SynthCorpus corpus;
  corpus.features.resize(static_cast<std::size_t>(utterances));
  std::vector<std::vector<AlignmentEntry>> per_utt(static_cast<std::size_t>(utterances));

  parallel_for(static_cast<std::size_t>(utterances), threads, [&](std::size_t u) {
    std::mt19937_64 rng(derive_seed(config.seed, u));
    std::uniform_int_distribution<int> pick_vowel(0, vowels - 1);
    std::uniform_int_distribution<int> pick_tone(0, tones - 1);
    std::uniform_int_distribution<int> pick_len(config.min_duration, config.max_duration);
    std::normal_distribution<double> noise(0.0, 1.0);

    const int first = static_cast<int>(u) * config.phones_per_utterance;
    const int count = std::min(config.phones_per_utterance, config.phones - first);
    struct Phone {
      int vowel, tone, length;
    };
    std::vector<Phone> phones;
    int frames = 0;
    for (int k = 0; k < count; ++k) {
      Phone ph{pick_vowel(rng), pick_tone(rng), pick_len(rng)};
      frames += ph.length;
      phones.push_back(ph);
    }

    UtteranceFeatures& utt = corpus.features[u];
    utt.utterance_id = fmt::format("syn{:0{}}", u, digits);
    utt.frame_hop = config.frame_hop;
    utt.frames.resize(frames, config.dim);
    int t0 = 0;
    for (const Phone& ph : phones) {
      const ToneShape shape = tone_shape(scheme, scheme.tones()[static_cast<std::size_t>(ph.tone)]);
      for (int t = 0; t < ph.length; ++t) {
        const double p = (t + 0.5) / ph.length;
        auto row = utt.frames.row(t0 + t);
        for (int d = 0; d < config.dim; ++d) {
          double x = config.noise_sigma * noise(rng);
          if (d == ph.vowel) x += config.phone_amplitude;
          if (d == vowels) x += config.tone_amplitude * tone_pitch(shape, p);
          if (d == vowels + 1) x += config.tone_amplitude * 0.5 * tone_slope(shape, p);
          row(d) = static_cast<float>(x);
        }
      }
      AlignmentEntry e;
      e.utterance_id = utt.utterance_id;
      e.phone_label = scheme.compose(scheme.vowels()[static_cast<std::size_t>(ph.vowel)],
                                     scheme.tones()[static_cast<std::size_t>(ph.tone)]);
      e.start = t0 * config.frame_hop;
      e.end = (t0 + ph.length) * config.frame_hop;
      e.is_vowel = true;
      per_utt[u].push_back(std::move(e));
      t0 += ph.length;
    }
  });

  for (auto& entries : per_utt)
    for (auto& e : entries) corpus.alignments.push_back(std::move(e));
  return corpus;
}

SynthOutput write_corpus(const SynthCorpus& corpus, const SynthConfig& config,
                         const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "feats");
  SynthOutput out{dir / "manifest.tsv", dir / "alignments.csv", dir / "provenance.json"};

  std::vector<std::pair<std::string, std::string>> manifest;
  for (const UtteranceFeatures& utt : corpus.features) {
    const std::string rel = "feats/" + utt.utterance_id + ".sslf";
    write_features(dir / rel, utt.frames);
    manifest.emplace_back(utt.utterance_id, rel);
  }
  write_manifest(out.manifest, manifest);
  write_alignments(out.alignments, corpus.alignments);

  nlohmann::ordered_json prov;
  prov["generator"] = "tonequant synth";
  prov["language"] = std::string(LabelScheme::for_language(config.language).name());
  prov["dim"] = config.dim;
  prov["phones"] = config.phones;
  prov["phones_per_utterance"] = config.phones_per_utterance;
  prov["phone_amplitude"] = config.phone_amplitude;
  prov["tone_amplitude"] = config.tone_amplitude;
  prov["noise_sigma"] = config.noise_sigma;
  prov["min_duration"] = config.min_duration;
  prov["max_duration"] = config.max_duration;
  prov["frame_hop"] = config.frame_hop;
  prov["seed"] = config.seed;
  prov["utterances"] = corpus.features.size();
  std::ofstream pf(out.provenance, std::ios::binary);
  if (!pf) throw Error(fmt::format("cannot write {}", out.provenance.string()));
  pf << prov.dump(2) << '\n';
  return out;
}

}  // namespace tonequant

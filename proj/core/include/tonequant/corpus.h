// tonequant/corpus.h

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

#ifndef TONEQUANT_CORPUS_H_
#define TONEQUANT_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tonequant/common.h"

// Corpus loading: SSLF feature dumps, alignment CSVs, and the Mandarin /
// Yoruba vowel-tone label schemes.
//
// SSLF layout (little-endian):
//   bytes 0..3   "SSLF"
//   u32          version (= 1)
//   u32          T  (frames)
//   u32          D  (dimension)
//   f32[T*D]     row-major payload

namespace tonequant {

inline constexpr std::uint32_t kSslfVersion = 1;
inline constexpr double kDefaultFrameHop = 0.02;

struct UtteranceFeatures {
  std::string utterance_id;
  FrameMatrix frames;  // T x D
  double frame_hop = kDefaultFrameHop;

  std::size_t num_frames() const { return static_cast<std::size_t>(frames.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(frames.cols()); }
};

/// Reads one SSLF file. Rejects bad magic, unknown versions, empty shapes,
/// truncated or oversized payloads and non-finite values.
UtteranceFeatures load_features(const std::filesystem::path& path,
                                std::string utterance_id = {},
                                double frame_hop = kDefaultFrameHop);

void write_features(const std::filesystem::path& path, const FrameMatrix& frames);

/// Manifest: one `utterance_id<TAB>relative_path` line per utterance. Paths
/// are returned resolved against the manifest's directory.
std::vector<std::pair<std::string, std::filesystem::path>> load_manifest(
    const std::filesystem::path& path);

void write_manifest(
    const std::filesystem::path& path,
    const std::vector<std::pair<std::string, std::string>>& entries);

/// Loads every utterance listed in a manifest, in manifest order.
std::vector<UtteranceFeatures> load_corpus_features(
    const std::filesystem::path& manifest, double frame_hop = kDefaultFrameHop);

// ---------------------------------------------------------------------------
// Label schemes

enum class Language { kMandarin, kYoruba };

struct ParsedLabel {
  std::string vowel;
  // Unset for a bare Mandarin vowel, which carries no tone digit.
  std::optional<std::string> tone;
};

class LabelScheme {
 public:
  static const LabelScheme& mandarin();
  static const LabelScheme& yoruba();
  static const LabelScheme& for_language(Language language);
  /// Accepts "mandarin" / "yoruba" (case-insensitive).
  static const LabelScheme& from_name(std::string_view name);

  Language language() const { return language_; }
  std::string_view name() const;
  const std::vector<std::string>& vowels() const { return vowels_; }
  const std::vector<std::string>& tones() const { return tones_; }

  /// Splits a phone label into (vowel, tone). Returns nullopt for anything
  /// outside the monophthong inventory (consonants, diphthongs, nasal
  /// vowels, silence).
  std::optional<ParsedLabel> parse(std::string_view label) const;

  /// Inverse of parse for a (vowel, tone) pair: "a3", "aH", "a" (Yoruba
  /// neutral).
  std::string compose(std::string_view vowel, std::string_view tone) const;

  int vowel_index(std::string_view vowel) const;  // -1 if absent
  int tone_index(std::string_view tone) const;    // -1 if absent

 private:
  LabelScheme(Language language, std::vector<std::string> vowels,
              std::vector<std::string> tones);

  Language language_;
  std::vector<std::string> vowels_;
  std::vector<std::string> tones_;
};

inline std::optional<ParsedLabel> parse_label(std::string_view label,
                                              const LabelScheme& scheme) {
  return scheme.parse(label);
}

// ---------------------------------------------------------------------------
// Alignments

struct AlignmentEntry {
  std::string utterance_id;
  std::string phone_label;
  double start = 0.0;  // seconds
  double end = 0.0;    // seconds
  bool is_vowel = false;
};

/// Reads `utt_id,phone,start_s,end_s` CSV. Entries come back grouped by
/// utterance (utterances in order of first appearance) and sorted by start;
/// overlapping spans, non-positive durations and unparsable rows throw.
std::vector<AlignmentEntry> load_alignments(const std::filesystem::path& path,
                                            const LabelScheme& scheme);

void write_alignments(const std::filesystem::path& path,
                      const std::vector<AlignmentEntry>& entries);

/// Frame span [first, last) covered by a time interval:
/// first = floor(start / hop), last = min(T, ceil(end / hop)), widened to one
/// frame when empty. Quotients within 1e-9 of an integer are snapped to it so
/// that times written as k * hop map back to frame k.
std::pair<std::size_t, std::size_t> time_to_frames(double start, double end,
                                                   double frame_hop,
                                                   std::size_t num_frames);

// ---------------------------------------------------------------------------
// Segments and tasks

struct PhoneSegment {
  std::string utterance_id;
  std::size_t utterance_index = 0;  // index into the features vector
  std::size_t frame_start = 0;      // inclusive
  std::size_t frame_end = 0;        // exclusive
  std::string vowel;
  std::string tone;

  std::size_t length() const { return frame_end - frame_start; }
};

struct SegmentationResult {
  std::vector<PhoneSegment> segments;
  std::size_t dropped_non_vowel = 0;
  std::size_t dropped_toneless = 0;
  std::size_t dropped_no_frames = 0;
};

/// One segment per vowel phone with a defined tone. Throws on alignments for
/// unknown utterances or extending more than one frame hop past the end of
/// their utterance.
SegmentationResult build_segments(const std::vector<UtteranceFeatures>& features,
                                  const std::vector<AlignmentEntry>& alignments,
                                  const LabelScheme& scheme);

enum class TaskKind { kVowelWithTone, kVowelWithoutTone, kToneOnly };

inline constexpr TaskKind kAllTasks[] = {TaskKind::kVowelWithoutTone,
                                         TaskKind::kVowelWithTone,
                                         TaskKind::kToneOnly};

/// "vowel-with-tone", "vowel-without-tone", "tone-only".
std::string_view task_name(TaskKind task);
TaskKind task_from_name(std::string_view name);

/// Full class inventory of a task, vowel-major with tones inside each vowel.
std::vector<std::string> task_classes(const LabelScheme& scheme, TaskKind task);

std::string task_label(const PhoneSegment& segment, const LabelScheme& scheme,
                       TaskKind task);

}  // namespace tonequant

#endif  // TONEQUANT_CORPUS_H_

// core/src/corpus.cc

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

#include "tonequant/corpus.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <unordered_map>

#include <fmt/format.h>

#include "binary_io.h"
#include "text_util.h"

namespace tonequant {

namespace fs = std::filesystem;

UtteranceFeatures load_features(const fs::path& path, std::string utterance_id,
                                double frame_hop) {
  if (!(frame_hop > 0.0)) throw InvalidArgument("frame_hop must be positive");
  const auto bytes = detail::read_file_bytes(path);
  detail::ByteReader in(bytes, path);
  in.expect_magic("SSLF");
  const std::uint32_t version = in.u32();
  if (version != kSslfVersion)
    in.fail(fmt::format("version mismatch (found {}, expected {})", version,
                        kSslfVersion));
  const std::uint32_t rows = in.u32();
  const std::uint32_t cols = in.u32();
  if (rows == 0 || cols == 0)
    in.fail(fmt::format("empty shape T={} D={}", rows, cols));
  const std::uint64_t expected = std::uint64_t{rows} * cols * 4;
  if (in.remaining() < expected)
    in.fail(fmt::format("truncated payload ({} bytes, header declares {})",
                        in.remaining(), expected));
  if (in.remaining() > expected)
    in.fail(fmt::format("trailing bytes after payload ({} extra)",
                        in.remaining() - expected));

  UtteranceFeatures out;
  out.utterance_id = std::move(utterance_id);
  out.frame_hop = frame_hop;
  out.frames.resize(rows, cols);
  for (std::uint32_t t = 0; t < rows; ++t) {
    for (std::uint32_t d = 0; d < cols; ++d) {
      const std::size_t at = in.offset();
      const float v = in.f32();
      if (!std::isfinite(v))
        throw FormatError(fmt::format("{}: offset {}: non-finite value at ({},{})",
                                      path.string(), at, t, d));
      out.frames(t, d) = v;
    }
  }
  return out;
}

void write_features(const fs::path& path, const FrameMatrix& frames) {
  if (frames.rows() == 0 || frames.cols() == 0)
    throw InvalidArgument("cannot write an empty feature matrix");
  detail::ByteWriter w;
  w.reserve(16 + static_cast<std::size_t>(frames.size()) * 4);
  w.magic("SSLF");
  w.u32(kSslfVersion);
  w.u32(static_cast<std::uint32_t>(frames.rows()));
  w.u32(static_cast<std::uint32_t>(frames.cols()));
  for (Eigen::Index t = 0; t < frames.rows(); ++t)
    for (Eigen::Index d = 0; d < frames.cols(); ++d) w.f32(frames(t, d));
  detail::write_file_bytes(path, w.bytes());
}

std::vector<std::pair<std::string, fs::path>> load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(fmt::format("{}: cannot open manifest", path.string()));
  const fs::path base = path.parent_path();
  std::vector<std::pair<std::string, fs::path>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = detail::trim(line);
    if (text.empty()) continue;
    const auto tab = text.find('\t');
    if (tab == std::string_view::npos || tab == 0 || tab + 1 == text.size())
      throw FormatError(fmt::format("{}: line {}: expected utterance_id<TAB>path",
                                    path.string(), line_no));
    fs::path rel{std::string(text.substr(tab + 1))};
    entries.emplace_back(std::string(text.substr(0, tab)),
                         rel.is_absolute() ? rel : base / rel);
  }
  return entries;
}

void write_manifest(const fs::path& path,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(fmt::format("{}: cannot open for writing", path.string()));
  for (const auto& [id, rel] : entries) out << id << '\t' << rel << '\n';
}

std::vector<UtteranceFeatures> load_corpus_features(const fs::path& manifest,
                                                    double frame_hop) {
  std::vector<UtteranceFeatures> out;
  for (auto& [id, file] : load_manifest(manifest))
    out.push_back(load_features(file, id, frame_hop));
  return out;
}

// ---------------------------------------------------------------------------

LabelScheme::LabelScheme(Language language, std::vector<std::string> vowels,
                         std::vector<std::string> tones)
    : language_(language), vowels_(std::move(vowels)), tones_(std::move(tones)) {}

const LabelScheme& LabelScheme::mandarin() {
  static const LabelScheme scheme(Language::kMandarin, {"a", "e", "i", "o", "u"},
                                  {"1", "2", "3", "4", "5"});
  return scheme;
}

const LabelScheme& LabelScheme::yoruba() {
  static const LabelScheme scheme(Language::kYoruba,
                                  {"a", "e", "ɛ", "i", "o", "ɔ", "u"},
                                  {"H", "L", "Neutral"});
  return scheme;
}

const LabelScheme& LabelScheme::for_language(Language language) {
  return language == Language::kMandarin ? mandarin() : yoruba();
}

const LabelScheme& LabelScheme::from_name(std::string_view name) {
  const std::string lower = detail::to_lower(name);
  if (lower == "mandarin") return mandarin();
  if (lower == "yoruba") return yoruba();
  throw InvalidArgument(fmt::format("unknown label scheme \"{}\"", name));
}

std::string_view LabelScheme::name() const {
  return language_ == Language::kMandarin ? "mandarin" : "yoruba";
}

int LabelScheme::vowel_index(std::string_view vowel) const {
  const auto it = std::find(vowels_.begin(), vowels_.end(), vowel);
  return it == vowels_.end() ? -1 : static_cast<int>(it - vowels_.begin());
}

int LabelScheme::tone_index(std::string_view tone) const {
  const auto it = std::find(tones_.begin(), tones_.end(), tone);
  return it == tones_.end() ? -1 : static_cast<int>(it - tones_.begin());
}

std::optional<ParsedLabel> LabelScheme::parse(std::string_view label) const {
  if (label.empty()) return std::nullopt;
  if (vowel_index(label) >= 0) {
    ParsedLabel bare{std::string(label), std::nullopt};
    if (language_ == Language::kYoruba) bare.tone = "Neutral";
    return bare;
  }
  const std::string_view base = label.substr(0, label.size() - 1);
  const char last = label.back();
  if (vowel_index(base) < 0) return std::nullopt;
  if (language_ == Language::kMandarin) {
    if (last >= '1' && last <= '5') return ParsedLabel{std::string(base), std::string(1, last)};
  } else if (last == 'H' || last == 'L') {
    return ParsedLabel{std::string(base), std::string(1, last)};
  }
  return std::nullopt;
}

std::string LabelScheme::compose(std::string_view vowel, std::string_view tone) const {
  if (language_ == Language::kYoruba && tone == "Neutral") return std::string(vowel);
  return std::string(vowel) + std::string(tone);
}

// ---------------------------------------------------------------------------

namespace {

double parse_seconds(std::string_view field, const fs::path& path, std::size_t line_no,
                     const char* column) {
  double value = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value))
    throw FormatError(fmt::format("{}: line {}: unparsable {} \"{}\"", path.string(),
                                  line_no, column, field));
  return value;
}

}  // namespace

std::vector<AlignmentEntry> load_alignments(const fs::path& path,
                                            const LabelScheme& scheme) {
  std::ifstream in(path);
  if (!in) throw FormatError(fmt::format("{}: cannot open alignment CSV", path.string()));

  std::string line;
  std::size_t line_no = 0;
  bool seen_header = false;
  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<AlignmentEntry>> by_utt;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = detail::trim(line);
    if (line_no == 1) text = detail::strip_utf8_bom(text);
    if (text.empty()) continue;
    const auto fields = detail::split(text, ',');
    if (!seen_header) {
      if (fields.size() != 4 || detail::trim(fields[0]) != "utt_id" ||
          detail::trim(fields[1]) != "phone" || detail::trim(fields[2]) != "start_s" ||
          detail::trim(fields[3]) != "end_s")
        throw FormatError(fmt::format(
            "{}: line {}: expected header utt_id,phone,start_s,end_s", path.string(),
            line_no));
      seen_header = true;
      continue;
    }
    if (fields.size() != 4)
      throw FormatError(fmt::format("{}: line {}: expected 4 fields, found {}",
                                    path.string(), line_no, fields.size()));
    AlignmentEntry e;
    e.utterance_id = std::string(detail::trim(fields[0]));
    e.phone_label = std::string(detail::trim(fields[1]));
    if (e.utterance_id.empty() || e.phone_label.empty())
      throw FormatError(fmt::format("{}: line {}: empty utterance id or phone",
                                    path.string(), line_no));
    e.start = parse_seconds(detail::trim(fields[2]), path, line_no, "start_s");
    e.end = parse_seconds(detail::trim(fields[3]), path, line_no, "end_s");
    if (e.start < 0.0)
      throw FormatError(fmt::format("{}: line {}: negative start time {}",
                                    path.string(), line_no, e.start));
    if (!(e.end > e.start))
      throw FormatError(fmt::format("{}: line {}: non-positive duration [{}, {})",
                                    path.string(), line_no, e.start, e.end));
    e.is_vowel = scheme.parse(e.phone_label).has_value();
    auto [it, inserted] = by_utt.try_emplace(e.utterance_id);
    if (inserted) order.push_back(e.utterance_id);
    it->second.push_back(std::move(e));
  }
  if (!seen_header)
    throw FormatError(fmt::format("{}: missing header utt_id,phone,start_s,end_s",
                                  path.string()));

  std::vector<AlignmentEntry> out;
  for (const auto& utt : order) {
    auto& entries = by_utt[utt];
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.start < b.start; });
    for (std::size_t i = 1; i < entries.size(); ++i) {
      if (entries[i].start < entries[i - 1].end)
        throw FormatError(fmt::format(
            "{}: utterance {}: overlapping phones \"{}\" [{}, {}) and \"{}\" [{}, {})",
            path.string(), utt, entries[i - 1].phone_label, entries[i - 1].start,
            entries[i - 1].end, entries[i].phone_label, entries[i].start,
            entries[i].end));
    }
    std::move(entries.begin(), entries.end(), std::back_inserter(out));
  }
  return out;
}

void write_alignments(const fs::path& path, const std::vector<AlignmentEntry>& entries) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(fmt::format("{}: cannot open for writing", path.string()));
  out << "utt_id,phone,start_s,end_s\n";
  for (const auto& e : entries)
    out << fmt::format("{},{},{},{}\n", e.utterance_id, e.phone_label, e.start, e.end);
}

std::pair<std::size_t, std::size_t> time_to_frames(double start, double end,
                                                   double frame_hop,
                                                   std::size_t num_frames) {
  if (!(frame_hop > 0.0)) throw InvalidArgument("frame_hop must be positive");
  if (!(start >= 0.0) || !(end > start))
    throw InvalidArgument(fmt::format("invalid time span [{}, {})", start, end));
  if (num_frames == 0) throw InvalidArgument("utterance has no frames");
  auto snap = [](double x) {
    const double r = std::round(x);
    return std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x)) ? r : x;
  };
  const double first_f = std::floor(snap(start / frame_hop));
  const double last_f = std::ceil(snap(end / frame_hop));
  if (first_f >= static_cast<double>(num_frames))
    throw InvalidArgument(fmt::format(
        "start {} s is beyond the utterance end ({} frames of {} s)", start,
        num_frames, frame_hop));
  std::size_t first = static_cast<std::size_t>(first_f);
  std::size_t last = last_f >= static_cast<double>(num_frames)
                         ? num_frames
                         : static_cast<std::size_t>(last_f);
  if (last <= first) {
    first = std::min(first, num_frames - 1);
    last = first + 1;
  }
  return {first, last};
}

// ---------------------------------------------------------------------------

SegmentationResult build_segments(const std::vector<UtteranceFeatures>& features,
                                  const std::vector<AlignmentEntry>& alignments,
                                  const LabelScheme& scheme) {
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < features.size(); ++i)
    index.emplace(features[i].utterance_id, i);

  SegmentationResult result;
  std::string_view current_utt;
  std::size_t claimed_until = 0;  // frames already owned by earlier phones

  for (const auto& e : alignments) {
    const auto it = index.find(e.utterance_id);
    if (it == index.end())
      throw InvalidArgument(
          fmt::format("alignment references unknown utterance \"{}\"", e.utterance_id));
    const UtteranceFeatures& utt = features[it->second];
    const double duration = static_cast<double>(utt.num_frames()) * utt.frame_hop;
    if (e.end > duration + utt.frame_hop * (1.0 + 1e-9))
      throw InvalidArgument(fmt::format(
          "utterance {}: phone \"{}\" ends at {} s, more than one frame past the "
          "utterance end ({} s)",
          e.utterance_id, e.phone_label, e.end, duration));
    if (e.utterance_id != current_utt) {
      current_utt = e.utterance_id;
      claimed_until = 0;
    }

    auto [first, last] = time_to_frames(e.start, e.end, utt.frame_hop, utt.num_frames());
    // floor/ceil can hand a boundary frame to both neighbours; the earlier
    // phone keeps it.
    first = std::max(first, claimed_until);
    if (last <= first) last = first + 1;
    if (last > utt.num_frames()) {
      ++result.dropped_no_frames;  // every frame already claimed
      continue;
    }
    claimed_until = last;

    const auto parsed = scheme.parse(e.phone_label);
    if (!parsed) {
      ++result.dropped_non_vowel;
      continue;
    }
    if (!parsed->tone) {
      ++result.dropped_toneless;
      continue;
    }
    PhoneSegment seg;
    seg.utterance_id = e.utterance_id;
    seg.utterance_index = it->second;
    seg.frame_start = first;
    seg.frame_end = last;
    seg.vowel = parsed->vowel;
    seg.tone = *parsed->tone;
    result.segments.push_back(std::move(seg));
  }
  return result;
}

std::string_view task_name(TaskKind task) {
  switch (task) {
    case TaskKind::kVowelWithTone: return "vowel-with-tone";
    case TaskKind::kVowelWithoutTone: return "vowel-without-tone";
    case TaskKind::kToneOnly: return "tone-only";
  }
  return "unknown";
}

TaskKind task_from_name(std::string_view name) {
  for (TaskKind t : kAllTasks)
    if (task_name(t) == name) return t;
  throw InvalidArgument(fmt::format("unknown task \"{}\"", name));
}

std::vector<std::string> task_classes(const LabelScheme& scheme, TaskKind task) {
  switch (task) {
    case TaskKind::kVowelWithoutTone: return scheme.vowels();
    case TaskKind::kToneOnly: return scheme.tones();
    case TaskKind::kVowelWithTone: break;
  }
  std::vector<std::string> out;
  for (const auto& v : scheme.vowels()) {
    std::vector<std::string> per_vowel;
    for (const auto& t : scheme.tones()) per_vowel.push_back(scheme.compose(v, t));
    // Inventory order: "a, aH, aL" and "a1 ... a5".
    std::sort(per_vowel.begin(), per_vowel.end());
    out.insert(out.end(), per_vowel.begin(), per_vowel.end());
  }
  return out;
}

std::string task_label(const PhoneSegment& segment, const LabelScheme& scheme,
                       TaskKind task) {
  switch (task) {
    case TaskKind::kVowelWithTone: return scheme.compose(segment.vowel, segment.tone);
    case TaskKind::kVowelWithoutTone: return segment.vowel;
    case TaskKind::kToneOnly: return segment.tone;
  }
  return {};
}

}  // namespace tonequant

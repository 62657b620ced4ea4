// core/src/editdist.cc

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

#include "tonequant/editdist.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <unordered_set>

#include <fmt/format.h>
#include <json.hpp>

#include "tonequant/parallel.h"

namespace tonequant {

std::size_t levenshtein(std::span<const int> a, std::span<const int> b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

bool DistanceMatrix::any_flagged() const {
  return std::any_of(flagged.begin(), flagged.end(), [](std::uint8_t f) { return f != 0; });
}

namespace {

// Pairs (a, b) with a < b (or a <= b when self pairs count) over n
// instances, ranked row-major. first_rank(a) is the rank of the first pair
// in row a.
struct TrianglePairs {
  std::uint64_t n;
  bool with_self;

  std::uint64_t row_length(std::uint64_t a) const { return with_self ? n - a : n - a - 1; }
  std::uint64_t first_rank(std::uint64_t a) const {
    return with_self ? a * (2 * n - a + 1) / 2 : a * (2 * n - a - 1) / 2;
  }
  std::uint64_t total() const { return first_rank(with_self ? n : n - 1); }
  std::pair<std::uint64_t, std::uint64_t> unrank(std::uint64_t p) const {
    std::uint64_t lo = 0, hi = with_self ? n - 1 : n - 2;
    while (lo < hi) {  // largest a with first_rank(a) <= p
      const std::uint64_t mid = (lo + hi + 1) / 2;
      if (first_rank(mid) <= p) lo = mid;
      else hi = mid - 1;
    }
    const std::uint64_t offset = p - first_rank(lo);
    return {lo, lo + offset + (with_self ? 0 : 1)};
  }
};

// Floyd's algorithm: m distinct values from [0, n), returned sorted.
std::vector<std::uint64_t> sample_ranks(std::uint64_t n, std::uint64_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(m) * 2);
  for (std::uint64_t j = n - m; j < n; ++j) {
    const std::uint64_t t = std::uniform_int_distribution<std::uint64_t>(0, j)(rng);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

struct CellStats {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double stddev = std::numeric_limits<double>::quiet_NaN();
  std::int64_t count = 0;
};

}  // namespace

DistanceMatrix pairwise_class_distance(const std::vector<std::string>& classes,
                                       const std::vector<int>& labels,
                                       const std::vector<std::span<const int>>& sequences,
                                       const PairSamplingConfig& sampling, bool normalize,
                                       int threads) {
  if (sampling.max_pairs_per_cell < 1)
    throw InvalidArgument("pair sampling: max_pairs_per_cell must be at least 1");
  if (labels.size() != sequences.size())
    throw InvalidArgument("pairwise distance: label count differs from sequence count");
  if (labels.size() < 2) throw InvalidArgument("pairwise distance: need at least 2 instances");
  const std::size_t c = classes.size();
  std::vector<std::vector<std::size_t>> members(c);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= c)
      throw InvalidArgument(fmt::format("pairwise distance: label {} out of range", labels[i]));
    members[static_cast<std::size_t>(labels[i])].push_back(i);
  }

  auto pair_distance = [&](std::size_t x, std::size_t y) {
    const double d = static_cast<double>(levenshtein(sequences[x], sequences[y]));
    if (!normalize) return d;
    const std::size_t longest = std::max(sequences[x].size(), sequences[y].size());
    return longest == 0 ? 0.0 : d / static_cast<double>(longest);
  };

  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t j = i; j < c; ++j) cells.emplace_back(i, j);
  std::vector<CellStats> stats(cells.size());

  parallel_for(cells.size(), threads, [&](std::size_t k) {
    const auto [i, j] = cells[k];
    const auto& mi = members[i];
    const auto& mj = members[j];
    std::uint64_t total;
    TrianglePairs tri{mi.size(), sampling.include_self_pairs};
    if (i == j) total = mi.empty() ? 0 : tri.total();
    else total = static_cast<std::uint64_t>(mi.size()) * mj.size();
    if (total == 0) return;

    auto instance_pair = [&](std::uint64_t rank) -> std::pair<std::size_t, std::size_t> {
      if (i != j) return {mi[rank / mj.size()], mj[rank % mj.size()]};
      const auto [a, b] = tri.unrank(rank);
      return {mi[a], mi[b]};
    };

    double sum = 0.0, sum_sq = 0.0;
    std::uint64_t used = 0;
    auto accumulate = [&](std::uint64_t rank) {
      const auto [x, y] = instance_pair(rank);
      const double d = pair_distance(x, y);
      sum += d;
      sum_sq += d * d;
      ++used;
    };
    if (total <= sampling.max_pairs_per_cell) {
      for (std::uint64_t r = 0; r < total; ++r) accumulate(r);
    } else {
      for (std::uint64_t r : sample_ranks(total, sampling.max_pairs_per_cell,
                                          derive_seed(sampling.seed, i, j)))
        accumulate(r);
    }
    CellStats& s = stats[k];
    s.count = static_cast<std::int64_t>(used);
    s.mean = sum / static_cast<double>(used);
    s.stddev = used > 1 ? std::sqrt(std::max(0.0, (sum_sq - sum * s.mean) /
                                                      static_cast<double>(used - 1)))
                        : 0.0;
  });

  DistanceMatrix m;
  m.classes = classes;
  m.normalized = normalize;
  m.sampling = sampling;
  const auto ci = static_cast<Eigen::Index>(c);
  m.values.setConstant(ci, ci, std::numeric_limits<double>::quiet_NaN());
  m.stddev.setConstant(ci, ci, std::numeric_limits<double>::quiet_NaN());
  m.counts.setZero(ci, ci);
  m.flagged.assign(c * c, 0);
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto [i, j] = cells[k];
    const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
    m.values(a, b) = m.values(b, a) = stats[k].mean;
    m.stddev(a, b) = m.stddev(b, a) = stats[k].stddev;
    m.counts(a, b) = m.counts(b, a) = stats[k].count;
    if (stats[k].count == 0) m.flagged[i * c + j] = m.flagged[j * c + i] = 1;
  }
  return m;
}

DistanceMatrix pairwise_class_distance(const ProbeDataset& dataset,
                                       const PairSamplingConfig& sampling, bool normalize,
                                       int threads) {
  std::vector<std::span<const int>> sequences;
  sequences.reserve(dataset.size());
  for (const PhoneRepresentation& item : *dataset.items) sequences.emplace_back(item.symbol_seq);
  DistanceMatrix m =
      pairwise_class_distance(dataset.classes, dataset.labels, sequences, sampling, normalize,
                              threads);
  m.task = std::string(task_name(dataset.task));
  return m;
}

double diagonal_contrast(const DistanceMatrix& matrix) {
  const int c = matrix.size();
  if (c < 2) throw InvalidArgument("diagonal contrast needs at least 2 classes");
  if (matrix.any_flagged()) throw InvalidArgument("diagonal contrast: matrix has flagged cells");
  double diag = 0.0, off = 0.0;
  for (int i = 0; i < c; ++i)
    for (int j = 0; j < c; ++j) (i == j ? diag : off) += matrix.values(i, j);
  diag /= c;
  off /= static_cast<double>(c) * (c - 1);
  if (off == 0.0) throw InvalidArgument("diagonal contrast: off-diagonal mean is zero");
  return (off - diag) / off;
}

void write_distance_csv(const DistanceMatrix& matrix, const std::filesystem::path& csv) {
  std::ofstream out(csv, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write {}", csv.string()));
  out << "class";
  for (const auto& name : matrix.classes) out << ',' << name;
  out << '\n';
  for (int i = 0; i < matrix.size(); ++i) {
    out << matrix.classes[static_cast<std::size_t>(i)];
    for (int j = 0; j < matrix.size(); ++j) {
      if (matrix.is_flagged(i, j)) out << ",NA";
      else out << ',' << fmt::format("{}", matrix.values(i, j));
    }
    out << '\n';
  }
  if (!out) throw Error(fmt::format("write failed: {}", csv.string()));
}

void write_distance_metadata(const DistanceMatrix& matrix, const std::filesystem::path& json) {
  nlohmann::ordered_json meta;
  meta["task"] = matrix.task;
  meta["normalized"] = matrix.normalized;
  meta["classes"] = matrix.classes;
  meta["sampling"] = {{"max_pairs_per_cell", matrix.sampling.max_pairs_per_cell},
                      {"seed", matrix.sampling.seed},
                      {"include_self_pairs", matrix.sampling.include_self_pairs}};
  std::vector<std::vector<std::int64_t>> counts;
  for (int i = 0; i < matrix.size(); ++i) {
    counts.emplace_back();
    for (int j = 0; j < matrix.size(); ++j) counts.back().push_back(matrix.counts(i, j));
  }
  meta["pair_counts"] = counts;
  std::vector<std::string> flagged;
  for (int i = 0; i < matrix.size(); ++i)
    for (int j = i; j < matrix.size(); ++j)
      if (matrix.is_flagged(i, j))
        flagged.push_back(matrix.classes[static_cast<std::size_t>(i)] + "|" +
                          matrix.classes[static_cast<std::size_t>(j)]);
  meta["flagged_cells"] = flagged;
  if (matrix.size() >= 2 && !matrix.any_flagged()) {
    try {
      meta["diagonal_contrast"] = diagonal_contrast(matrix);
    } catch (const InvalidArgument&) {
      meta["diagonal_contrast"] = nullptr;  // all-zero off-diagonal
    }
  }
  std::ofstream out(json, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write {}", json.string()));
  out << meta.dump(2) << '\n';
}

DistanceMatrix read_distance_csv(const std::filesystem::path& csv) {
  std::ifstream in(csv, std::ios::binary);
  if (!in) throw FormatError(fmt::format("{}: cannot open file", csv.string()));
  auto split = [](const std::string& line) {
    std::vector<std::string> out(1);
    for (char ch : line) {
      if (ch == ',') out.emplace_back();
      else if (ch != '\r') out.back() += ch;
    }
    return out;
  };
  std::string line;
  if (!std::getline(in, line)) throw FormatError(fmt::format("{}: line 1: empty file", csv.string()));
  std::vector<std::string> header = split(line);
  DistanceMatrix m;
  m.classes.assign(header.begin() + 1, header.end());
  const std::size_t c = m.classes.size();
  if (c == 0) throw FormatError(fmt::format("{}: line 1: no classes", csv.string()));
  const auto ci = static_cast<Eigen::Index>(c);
  m.values.setConstant(ci, ci, std::numeric_limits<double>::quiet_NaN());
  m.stddev.setZero(ci, ci);
  m.counts.setZero(ci, ci);
  m.flagged.assign(c * c, 0);
  for (std::size_t i = 0; i < c; ++i) {
    if (!std::getline(in, line))
      throw FormatError(fmt::format("{}: line {}: missing row", csv.string(), i + 2));
    const auto cells = split(line);
    if (cells.size() != c + 1 || cells[0] != m.classes[i])
      throw FormatError(fmt::format("{}: line {}: malformed row", csv.string(), i + 2));
    for (std::size_t j = 0; j < c; ++j) {
      const std::string& v = cells[j + 1];
      if (v == "NA") {
        m.flagged[i * c + j] = 1;
        continue;
      }
      try {
        std::size_t used = 0;
        m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
      } catch (const std::logic_error&) {
        throw FormatError(fmt::format("{}: line {}: bad value \"{}\"", csv.string(), i + 2, v));
      }
    }
  }
  std::filesystem::path sidecar = csv;
  sidecar.replace_extension(".json");
  if (std::filesystem::exists(sidecar)) {
    std::ifstream js(sidecar);
    const auto meta = nlohmann::json::parse(js, nullptr, false);
    if (meta.is_object()) {
      if (meta.contains("task") && meta["task"].is_string()) m.task = meta["task"].get<std::string>();
      if (meta.contains("normalized") && meta["normalized"].is_boolean())
        m.normalized = meta["normalized"].get<bool>();
    }
  }
  return m;
}

}  // namespace tonequant

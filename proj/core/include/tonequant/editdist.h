// tonequant/editdist.h

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

#ifndef TONEQUANT_EDITDIST_H_
#define TONEQUANT_EDITDIST_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tonequant/corpus.h"
#include "tonequant/represent.h"

namespace tonequant {

/// Unit-cost Levenshtein distance (insertions, deletions, substitutions).
std::size_t levenshtein(std::span<const int> a, std::span<const int> b);

struct PairSamplingConfig {
  std::size_t max_pairs_per_cell = 2000;
  std::uint64_t seed = 0;
  // Count (a, a) pairs in diagonal cells. Off by default.
  bool include_self_pairs = false;
};

/// Mean edit distance between instances of every pair of classes.
struct DistanceMatrix {
  std::vector<std::string> classes;
  Eigen::MatrixXd values;  // NaN in flagged cells
  Eigen::MatrixXd stddev;  // sample standard deviation of the pair distances
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;
  // Row-major C x C; 1 where the cell has no pair (e.g. a one-instance class
  // on the diagonal).
  std::vector<std::uint8_t> flagged;
  bool normalized = false;
  std::string task;
  PairSamplingConfig sampling;

  int size() const { return static_cast<int>(classes.size()); }
  bool is_flagged(int i, int j) const {
    return flagged[static_cast<std::size_t>(i) * classes.size() + static_cast<std::size_t>(j)] != 0;
  }
  bool any_flagged() const;
};

/// Cell (i, j) averages levenshtein over cross pairs of classes i and j; the
/// diagonal uses distinct-instance pairs. A cell with more candidate pairs
/// than the cap averages a uniform sample without replacement, seeded per
/// cell. With `normalize`, each distance is divided by max(|a|, |b|) first.
/// Deterministic for any thread count.
DistanceMatrix pairwise_class_distance(const std::vector<std::string>& classes,
                                       const std::vector<int>& labels,
                                       const std::vector<std::span<const int>>& sequences,
                                       const PairSamplingConfig& sampling, bool normalize,
                                       int threads = 1);

/// Same, over every item (both splits) of a probe dataset.
DistanceMatrix pairwise_class_distance(const ProbeDataset& dataset,
                                       const PairSamplingConfig& sampling, bool normalize,
                                       int threads = 1);

/// (mean off-diagonal - mean diagonal) / mean off-diagonal.
double diagonal_contrast(const DistanceMatrix& matrix);

/// CSV with a header row and first column of class labels ("NA" in flagged
/// cells), plus a JSON metadata sidecar.
void write_distance_csv(const DistanceMatrix& matrix, const std::filesystem::path& csv);
void write_distance_metadata(const DistanceMatrix& matrix, const std::filesystem::path& json);

/// Reads a matrix written by write_distance_csv. Counts and spread are not
/// stored in the CSV and come back zero; task and normalization come from a
/// sibling `.json` sidecar when one exists.
DistanceMatrix read_distance_csv(const std::filesystem::path& csv);

}  // namespace tonequant

#endif  // TONEQUANT_EDITDIST_H_

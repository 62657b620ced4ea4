// tonequant/quantize.h

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

#ifndef TONEQUANT_QUANTIZE_H_
#define TONEQUANT_QUANTIZE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "tonequant/common.h"

namespace tonequant {

enum class KMeansInit { kKMeansPlusPlus };

struct KMeansConfig {
  int k = 200;
  int max_iterations = 100;
  double rel_tolerance = 1e-4;
  std::uint64_t seed = 0;
  KMeansInit init = KMeansInit::kKMeansPlusPlus;
  // Independent k-means++ starts; the lowest final inertia wins.
  int n_init = 10;
  // Fit on a seeded uniform subsample of at most this many frames (0 = all).
  std::size_t max_frames = 0;
};

/// K cluster centroids; symbol s is the index of centroid s.
struct Codebook {
  RowMatrixXd centroids;  // K x D
  std::uint64_t seed = 0;
  double inertia = 0.0;
  int iterations_run = 0;
  // Inertia after the assignment step of each Lloyd iteration of the kept run.
  std::vector<double> inertia_trace;

  int k() const { return static_cast<int>(centroids.rows()); }
  int dim() const { return static_cast<int>(centroids.cols()); }
};

/// Lloyd's algorithm from config.n_init k-means++ starts (the first seeded by
/// config.seed), keeping the run with the lowest inertia. Each run stops when the relative inertia
/// improvement drops below config.rel_tolerance or after max_iterations.
/// Clusters left empty by an update are reseeded at the frame farthest from
/// its centroid. Deterministic for given (frames, config), for any `threads`.
Codebook kmeans_fit(const Eigen::Ref<const FrameMatrix>& frames,
                    const KMeansConfig& config, int threads = 1);
Codebook kmeans_fit(const Eigen::Ref<const RowMatrixXd>& frames,
                    const KMeansConfig& config, int threads = 1);

/// Nearest centroid (squared Euclidean) per row; ties go to the lower index.
std::vector<int> assign_symbols(const Codebook& codebook,
                                const Eigen::Ref<const FrameMatrix>& frames,
                                int threads = 1);
std::vector<int> assign_symbols(const Codebook& codebook,
                                const Eigen::Ref<const RowMatrixXd>& frames,
                                int threads = 1);

/// Sum of squared distances from each row to its nearest centroid.
double inertia(const Codebook& codebook, const Eigen::Ref<const FrameMatrix>& frames);
double inertia(const Codebook& codebook, const Eigen::Ref<const RowMatrixXd>& frames);

// SSLK: "SSLK", u32 version, u32 K, u32 D, u64 seed, f32[K*D] row-major.
// Centroids are stored at float32 precision.
inline constexpr std::uint32_t kSslkVersion = 1;

void save_codebook(const std::filesystem::path& path, const Codebook& codebook);
Codebook load_codebook(const std::filesystem::path& path);

}  // namespace tonequant

#endif  // TONEQUANT_QUANTIZE_H_

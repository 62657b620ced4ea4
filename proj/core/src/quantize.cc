// core/src/quantize.cc

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

#include "tonequant/quantize.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "binary_io.h"
#include "tonequant/parallel.h"

namespace tonequant {

namespace {

// Plain left-to-right accumulation; the result must not depend on how the
// caller batches frames.
inline double squared_distance(const double* a, const double* b, Eigen::Index dim) {
  double s = 0.0;
  for (Eigen::Index d = 0; d < dim; ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

struct Nearest {
  int index;
  double distance;
};

inline Nearest nearest_centroid(const RowMatrixXd& centroids, const double* x) {
  const Eigen::Index dim = centroids.cols();
  Nearest best{0, std::numeric_limits<double>::infinity()};
  for (Eigen::Index k = 0; k < centroids.rows(); ++k) {
    const double d = squared_distance(centroids.row(k).data(), x, dim);
    if (d < best.distance) best = {static_cast<int>(k), d};
  }
  return best;
}

void check_finite(const Eigen::Ref<const RowMatrixXd>& frames) {
  for (Eigen::Index i = 0; i < frames.rows(); ++i)
    for (Eigen::Index d = 0; d < frames.cols(); ++d)
      if (!std::isfinite(frames(i, d)))
        throw InvalidArgument(fmt::format("non-finite frame value at ({},{})", i, d));
}

void check_dims(const Codebook& codebook, Eigen::Index cols) {
  if (codebook.k() == 0) throw InvalidArgument("empty codebook");
  if (cols != codebook.dim())
    throw InvalidArgument(fmt::format("dimension mismatch: frames have {} columns, "
                                      "codebook has {}",
                                      cols, codebook.dim()));
}

// Assignment step shared by fitting and symbol assignment.
void assign(const RowMatrixXd& centroids, const Eigen::Ref<const RowMatrixXd>& x,
            std::vector<int>& labels, std::vector<double>& distances, int threads) {
  const auto n = static_cast<std::size_t>(x.rows());
  labels.resize(n);
  distances.resize(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const Nearest best = nearest_centroid(centroids, x.row(static_cast<Eigen::Index>(i)).data());
    labels[i] = best.index;
    distances[i] = best.distance;
  });
}

double ordered_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

RowMatrixXd kmeans_plus_plus(const Eigen::Ref<const RowMatrixXd>& x, int k,
                             std::mt19937_64& rng) {
  const Eigen::Index n = x.rows();
  const Eigen::Index dim = x.cols();
  RowMatrixXd centroids(k, dim);
  std::vector<double> min_dist(static_cast<std::size_t>(n),
                               std::numeric_limits<double>::infinity());
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);

  auto uniform_unchosen = [&]() -> Eigen::Index {
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    Eigen::Index i = pick(rng);
    while (chosen[static_cast<std::size_t>(i)]) i = (i + 1) % n;
    return i;
  };

  Eigen::Index next = uniform_unchosen();
  for (int c = 0; c < k; ++c) {
    chosen[static_cast<std::size_t>(next)] = true;
    centroids.row(c) = x.row(next);
    if (c + 1 == k) break;
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = squared_distance(x.row(i).data(), centroids.row(c).data(), dim);
      auto& m = min_dist[static_cast<std::size_t>(i)];
      m = std::min(m, d);
      total += m;
    }
    if (!(total > 0.0)) {
      // Every remaining point coincides with a chosen centroid.
      next = uniform_unchosen();
      continue;
    }
    std::uniform_real_distribution<double> u(0.0, total);
    const double target = u(rng);
    double acc = 0.0;
    next = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = min_dist[static_cast<std::size_t>(i)];
      if (m <= 0.0) continue;
      acc += m;
      next = i;
      if (acc >= target) break;
    }
  }
  return centroids;
}

}  // namespace

Codebook kmeans_fit(const Eigen::Ref<const FrameMatrix>& frames, const KMeansConfig& config,
                    int threads) {
  const RowMatrixXd x = frames.cast<double>();
  return kmeans_fit(x, config, threads);
}

namespace {

Codebook fit_once(const Eigen::Ref<const RowMatrixXd>& x, const KMeansConfig& config,
                  std::uint64_t seed, int threads) {
  const Eigen::Index n = x.rows();
  const Eigen::Index dim = x.cols();
  if (n < config.k)
    throw InvalidArgument(
        fmt::format("k-means: {} frames is fewer than K = {}", n, config.k));

  std::mt19937_64 rng(seed);
  Codebook cb;
  cb.seed = config.seed;
  cb.centroids = kmeans_plus_plus(x, config.k, rng);

  std::vector<int> labels;
  std::vector<double> dist;
  std::vector<double> counts(static_cast<std::size_t>(config.k));
  RowMatrixXd sums(config.k, dim);

  auto update_means = [&] {
    sums.setZero();
    std::fill(counts.begin(), counts.end(), 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int c = labels[static_cast<std::size_t>(i)];
      sums.row(c) += x.row(i);
      counts[static_cast<std::size_t>(c)] += 1.0;
    }
    for (int c = 0; c < config.k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0.0) {
        cb.centroids.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
        continue;
      }
      // Empty cluster: move it onto the frame farthest from its centroid.
      const auto far = std::max_element(dist.begin(), dist.end());
      const auto i = static_cast<Eigen::Index>(far - dist.begin());
      cb.centroids.row(c) = x.row(i);
      *far = -1.0;
    }
  };

  // Assign, record, then move centroids to the means. When the tolerance
  // stops a run whose assignment still changed, one more mean update and
  // assignment follow so the centroids are not left a step behind.
  std::vector<int> previous_labels;
  for (int it = 0; it < config.max_iterations; ++it) {
    assign(cb.centroids, x, labels, dist, threads);
    const double current = ordered_sum(dist);
    cb.inertia_trace.push_back(current);
    cb.iterations_run = it + 1;
    if (current == 0.0 || labels == previous_labels) break;
    if (it > 0) {
      const double previous = cb.inertia_trace[cb.inertia_trace.size() - 2];
      if ((previous - current) / previous < config.rel_tolerance) {
        update_means();
        assign(cb.centroids, x, labels, dist, threads);
        cb.inertia_trace.push_back(ordered_sum(dist));
        break;
      }
    }
    if (it + 1 == config.max_iterations) break;
    update_means();
    previous_labels = labels;
  }
  cb.inertia = cb.inertia_trace.back();
  return cb;
}

Codebook fit_impl(const Eigen::Ref<const RowMatrixXd>& x, const KMeansConfig& config,
                  int threads) {
  Codebook best = fit_once(x, config, config.seed, threads);
  for (int r = 1; r < config.n_init; ++r) {
    Codebook next = fit_once(x, config, derive_seed(config.seed, 0x1417ULL, r), threads);
    if (next.inertia < best.inertia) best = std::move(next);
  }
  best.seed = config.seed;
  return best;
}

}  // namespace

Codebook kmeans_fit(const Eigen::Ref<const RowMatrixXd>& frames, const KMeansConfig& config,
                    int threads) {
  if (config.k < 1) throw InvalidArgument("k-means: K must be at least 1");
  if (config.max_iterations < 1)
    throw InvalidArgument("k-means: max_iterations must be at least 1");
  if (config.n_init < 1) throw InvalidArgument("k-means: n_init must be at least 1");
  if (!(config.rel_tolerance >= 0.0))
    throw InvalidArgument("k-means: rel_tolerance must be non-negative");
  if (frames.cols() < 1) throw InvalidArgument("k-means: frames have no columns");
  check_finite(frames);

  const auto n = static_cast<std::size_t>(frames.rows());
  if (config.max_frames == 0 || n <= config.max_frames)
    return fit_impl(frames, config, threads);

  std::vector<Eigen::Index> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<Eigen::Index>(i);
  std::vector<Eigen::Index> keep;
  keep.reserve(config.max_frames);
  std::mt19937_64 sample_rng(derive_seed(config.seed, 0x5ab5ULL));
  std::sample(all.begin(), all.end(), std::back_inserter(keep), config.max_frames,
              sample_rng);
  RowMatrixXd subsample(static_cast<Eigen::Index>(keep.size()), frames.cols());
  for (std::size_t i = 0; i < keep.size(); ++i)
    subsample.row(static_cast<Eigen::Index>(i)) = frames.row(keep[i]);
  return fit_impl(subsample, config, threads);
}

std::vector<int> assign_symbols(const Codebook& codebook,
                                const Eigen::Ref<const FrameMatrix>& frames, int threads) {
  check_dims(codebook, frames.cols());
  const RowMatrixXd x = frames.cast<double>();
  return assign_symbols(codebook, x, threads);
}

std::vector<int> assign_symbols(const Codebook& codebook,
                                const Eigen::Ref<const RowMatrixXd>& frames, int threads) {
  check_dims(codebook, frames.cols());
  std::vector<int> labels;
  std::vector<double> dist;
  assign(codebook.centroids, frames, labels, dist, threads);
  return labels;
}

double inertia(const Codebook& codebook, const Eigen::Ref<const FrameMatrix>& frames) {
  check_dims(codebook, frames.cols());
  const RowMatrixXd x = frames.cast<double>();
  return inertia(codebook, x);
}

double inertia(const Codebook& codebook, const Eigen::Ref<const RowMatrixXd>& frames) {
  check_dims(codebook, frames.cols());
  std::vector<int> labels;
  std::vector<double> dist;
  assign(codebook.centroids, frames, labels, dist, 1);
  return ordered_sum(dist);
}

void save_codebook(const std::filesystem::path& path, const Codebook& codebook) {
  if (codebook.k() == 0 || codebook.dim() == 0)
    throw InvalidArgument("cannot save an empty codebook");
  detail::ByteWriter w;
  w.magic("SSLK");
  w.u32(kSslkVersion);
  w.u32(static_cast<std::uint32_t>(codebook.k()));
  w.u32(static_cast<std::uint32_t>(codebook.dim()));
  w.u64(codebook.seed);
  for (int k = 0; k < codebook.k(); ++k)
    for (int d = 0; d < codebook.dim(); ++d)
      w.f32(static_cast<float>(codebook.centroids(k, d)));
  detail::write_file_bytes(path, w.bytes());
}

Codebook load_codebook(const std::filesystem::path& path) {
  const auto bytes = detail::read_file_bytes(path);
  detail::ByteReader in(bytes, path);
  in.expect_magic("SSLK");
  const std::uint32_t version = in.u32();
  if (version != kSslkVersion)
    in.fail(fmt::format("version mismatch (found {}, expected {})", version, kSslkVersion));
  const std::uint32_t k = in.u32();
  const std::uint32_t dim = in.u32();
  Codebook cb;
  cb.seed = in.u64();
  if (k == 0 || dim == 0) in.fail(fmt::format("empty shape K={} D={}", k, dim));
  const std::uint64_t expected = std::uint64_t{k} * dim * 4;
  if (in.remaining() < expected) in.fail("truncated payload");
  if (in.remaining() > expected) in.fail("trailing bytes after payload");
  cb.centroids.resize(k, dim);
  for (std::uint32_t r = 0; r < k; ++r) {
    for (std::uint32_t d = 0; d < dim; ++d) {
      const float v = in.f32();
      if (!std::isfinite(v)) in.fail(fmt::format("non-finite centroid value at ({},{})", r, d));
      cb.centroids(r, d) = v;
    }
  }
  return cb;
}

}  // namespace tonequant

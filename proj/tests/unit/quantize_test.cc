// tests/unit/quantize_test.cc

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

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "test_util.h"
#include "tonequant/quantize.h"

namespace tonequant {
namespace {

using testing::random_frames;
using testing::TempDir;

// Minimal inertia over every assignment of the rows to k non-empty groups.
double exhaustive_optimum(const RowMatrixXd& x, int k) {
  const int n = static_cast<int>(x.rows());
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<int> count(static_cast<std::size_t>(k), 0);
    for (int v : a) ++count[static_cast<std::size_t>(v)];
    if (std::all_of(count.begin(), count.end(), [](int c) { return c > 0; })) {
      double total = 0.0;
      for (int g = 0; g < k; ++g) {
        Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(x.cols());
        for (int i = 0; i < n; ++i)
          if (a[static_cast<std::size_t>(i)] == g) mean += x.row(i);
        mean /= count[static_cast<std::size_t>(g)];
        for (int i = 0; i < n; ++i)
          if (a[static_cast<std::size_t>(i)] == g) total += (x.row(i) - mean).squaredNorm();
      }
      best = std::min(best, total);
    }
    int pos = 0;
    while (pos < n && ++a[static_cast<std::size_t>(pos)] == k) a[static_cast<std::size_t>(pos++)] = 0;
    if (pos == n) break;
  }
  return best;
}

TEST(KMeans, SingleClusterIsTheMean) {
  const FrameMatrix f = random_frames(40, 3, 1);
  KMeansConfig cfg;
  cfg.k = 1;
  const Codebook cb = kmeans_fit(f, cfg);
  const Eigen::RowVectorXd mean = f.cast<double>().colwise().mean();
  EXPECT_LT((cb.centroids.row(0) - mean).norm(), 1e-9 * (1.0 + mean.norm()));
  const double variance_times_n = (f.cast<double>().rowwise() - mean).squaredNorm();
  EXPECT_NEAR(cb.inertia, variance_times_n, 1e-9 * variance_times_n);
  for (int s : assign_symbols(cb, f)) EXPECT_EQ(s, 0);
}

TEST(KMeans, KEqualsNDistinctPointsHasZeroInertia) {
  const FrameMatrix f = random_frames(7, 2, 2);
  KMeansConfig cfg;
  cfg.k = 7;
  EXPECT_NEAR(kmeans_fit(f, cfg).inertia, 0.0, 1e-12);
}

TEST(KMeans, SixPointsTwoClustersMatchExhaustiveSearch) {
  RowMatrixXd x(6, 2);
  x << 0, 0, 0.3, 0.1, 0.1, 0.4, 5, 5, 5.2, 4.9, 4.8, 5.3;
  KMeansConfig cfg;
  cfg.k = 2;
  cfg.seed = 3;
  const Codebook cb = kmeans_fit(x, cfg);
  EXPECT_NEAR(cb.inertia, exhaustive_optimum(x, 2), 1e-9);
  const auto s = assign_symbols(cb, x);
  EXPECT_EQ(s[0], s[1]);
  EXPECT_EQ(s[0], s[2]);
  EXPECT_EQ(s[3], s[4]);
  EXPECT_NE(s[0], s[3]);
}

TEST(KMeans, RestartsNeverDoWorseThanTheFirstStart) {
  const FrameMatrix f = random_frames(60, 2, 13);
  KMeansConfig one;
  one.k = 5;
  one.seed = 4;
  one.n_init = 1;
  KMeansConfig many = one;
  many.n_init = 6;
  EXPECT_LE(kmeans_fit(f, many).inertia, kmeans_fit(f, one).inertia);
  EXPECT_EQ(kmeans_fit(f, many).seed, 4u);
  many.n_init = 0;
  EXPECT_THROW(kmeans_fit(f, many), InvalidArgument);
}

TEST(KMeans, InertiaTraceNonIncreasingAndDeterministic) {
  const FrameMatrix f = random_frames(500, 4, 9);
  KMeansConfig cfg;
  cfg.k = 12;
  cfg.seed = 17;
  const Codebook a = kmeans_fit(f, cfg);
  for (std::size_t i = 1; i < a.inertia_trace.size(); ++i)
    EXPECT_LE(a.inertia_trace[i], a.inertia_trace[i - 1] * (1 + 1e-12));
  const Codebook b = kmeans_fit(f, cfg, 3);
  EXPECT_EQ(a.centroids, b.centroids);
  EXPECT_EQ(assign_symbols(a, f), assign_symbols(b, f, 4));
}

TEST(KMeans, EveryClusterKeepsAMember) {
  // Heavy duplicates make empty clusters likely without reseeding.
  FrameMatrix f(60, 2);
  for (int i = 0; i < 60; ++i) f.row(i) << static_cast<float>(i % 3), 0.0f;
  f.row(59) << 100.0f, 100.0f;
  KMeansConfig cfg;
  cfg.k = 4;
  const Codebook cb = kmeans_fit(f, cfg);
  std::vector<int> count(4, 0);
  for (int s : assign_symbols(cb, f)) ++count[static_cast<std::size_t>(s)];
  for (int c : count) EXPECT_GT(c, 0);
}

TEST(KMeans, RejectsTooFewPointsAndNonFinite) {
  KMeansConfig cfg;
  cfg.k = 5;
  EXPECT_THROW(kmeans_fit(random_frames(4, 2, 1), cfg), InvalidArgument);
  FrameMatrix f = random_frames(10, 2, 1);
  f(3, 1) = std::numeric_limits<float>::infinity();
  EXPECT_THROW(kmeans_fit(f, cfg), InvalidArgument);
}

TEST(KMeans, SubsampleCapIsDeterministic) {
  const FrameMatrix f = random_frames(400, 3, 4);
  KMeansConfig cfg;
  cfg.k = 5;
  cfg.max_frames = 100;
  EXPECT_EQ(kmeans_fit(f, cfg).centroids, kmeans_fit(f, cfg).centroids);
}

TEST(Assign, NearestCentroidWithLowIndexTies) {
  Codebook cb;
  cb.centroids.resize(6, 2);
  cb.centroids << 10, 10, -10, 10, 1, 0, 7, 7, 4, 4, -1, 0;
  RowMatrixXd frames(2, 2);
  frames << 7, 7, 0, 0;  // equals centroid 3; equidistant from 2 and 5
  const auto s = assign_symbols(cb, frames);
  EXPECT_EQ(s[0], 3);
  EXPECT_EQ(s[1], 2);
}

TEST(Assign, MatchesScalarLoop) {
  const FrameMatrix f = random_frames(100, 5, 11);
  KMeansConfig cfg;
  cfg.k = 9;
  const Codebook cb = kmeans_fit(f, cfg);
  const auto fast = assign_symbols(cb, f, 4);
  for (int i = 0; i < 100; ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < cb.k(); ++c) {
      double d = 0;
      for (int j = 0; j < 5; ++j) {
        const double diff = static_cast<double>(f(i, j)) - cb.centroids(c, j);
        d += diff * diff;
      }
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    EXPECT_EQ(fast[static_cast<std::size_t>(i)], best);
  }
  EXPECT_THROW(assign_symbols(cb, random_frames(3, 4, 1)), InvalidArgument);
}

TEST(Inertia, MatchesDefinition) {
  Codebook cb;
  cb.centroids.resize(2, 2);
  cb.centroids << 0, 0, 10, 10;
  RowMatrixXd at(3, 2);
  at << 0, 0, 10, 10, 0, 0;
  EXPECT_DOUBLE_EQ(inertia(cb, at), 0.0);
  RowMatrixXd one(1, 2);
  one << 2, 0;
  EXPECT_DOUBLE_EQ(inertia(cb, one), 4.0);

  const FrameMatrix f = random_frames(80, 3, 5);
  KMeansConfig cfg;
  cfg.k = 4;
  const Codebook fit = kmeans_fit(f, cfg);
  double naive = 0;
  for (int i = 0; i < 80; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int c = 0; c < 4; ++c)
      best = std::min(best, (f.row(i).cast<double>() - fit.centroids.row(c)).squaredNorm());
    naive += best;
  }
  EXPECT_NEAR(inertia(fit, f), naive, 1e-9 * naive);
}

TEST(Codebook, FileRoundTrip) {
  TempDir dir;
  const FrameMatrix f = random_frames(50, 3, 6);
  KMeansConfig cfg;
  cfg.k = 4;
  cfg.seed = 77;
  const Codebook cb = kmeans_fit(f, cfg);
  save_codebook(dir / "c.sslk", cb);
  const Codebook back = load_codebook(dir / "c.sslk");
  EXPECT_EQ(back.seed, 77u);
  EXPECT_EQ(back.centroids.cast<float>(), cb.centroids.cast<float>());
  testing::write_all(dir / "bad.sslk", "SSLF0000");
  EXPECT_THROW(load_codebook(dir / "bad.sslk"), FormatError);
}

}  // namespace
}  // namespace tonequant

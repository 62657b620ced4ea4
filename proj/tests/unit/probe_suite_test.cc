// tests/unit/probe_suite_test.cc

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


#include <gtest/gtest.h>

#include "tonequant/probe_suite.h"
#include "tonequant/quantize.h"
#include "tonequant/synth.h"

namespace tonequant {
namespace {

struct SmallCorpus {
  SynthCorpus corpus;
  SegmentationResult seg;
  Codebook codebook;
};

const SmallCorpus& small_corpus() {
  static const SmallCorpus c = [] {
    SmallCorpus s;
    SynthConfig cfg;
    cfg.dim = 16;
    cfg.phones = 600;
    cfg.seed = 3;
    s.corpus = generate_corpus(cfg);
    s.seg = build_segments(s.corpus.features, s.corpus.alignments, LabelScheme::mandarin());
    FrameMatrix pooled(0, 16);
    for (const auto& u : s.corpus.features) {
      FrameMatrix next(pooled.rows() + u.frames.rows(), 16);
      next << pooled, u.frames;
      pooled.swap(next);
    }
    KMeansConfig km;
    km.k = 12;
    s.codebook = kmeans_fit(pooled, km);
    return s;
  }();
  return c;
}

ProbeSuiteConfig fast_config() {
  ProbeSuiteConfig cfg;
  for (TrainConfig* t : {&cfg.lstm_latents, &cfg.lstm_symbols}) {
    t->epochs = 3;
    t->hidden_size = 8;
    t->embed_dim = 4;
    t->learning_rate = 1.0;
  }
  cfg.logreg.epochs = 50;
  return cfg;
}

ProbeDataset dataset(TaskKind task) {
  const auto& c = small_corpus();
  return build_dataset(c.seg.segments, c.corpus.features, c.codebook, LabelScheme::mandarin(),
                       task, 1);
}

TEST(ProbeSuite, CellsFollowTaskThenRepresentationOrder) {
  ProbeSuiteConfig cfg = fast_config();
  cfg.representations = {Representation::kAveragedLatents};
  const ProbeTable t = run_probe_suite(
      {dataset(TaskKind::kVowelWithoutTone), dataset(TaskKind::kToneOnly)}, 12, cfg);
  ASSERT_EQ(t.cells.size(), 9u);
  std::size_t i = 0;
  for (TaskKind task : kAllTasks)
    for (Representation r : kAllRepresentations) {
      EXPECT_EQ(t.cells[i].task, task);
      EXPECT_EQ(t.cells[i].representation, r);
      ++i;
    }
  const auto& present = t.at(Representation::kAveragedLatents, TaskKind::kVowelWithoutTone);
  ASSERT_TRUE(present.report.has_value());
  EXPECT_GT(present.report->macro_f1, 0.5);
  EXPECT_FALSE(present.loss_trace.empty());

  const auto& unselected = t.at(Representation::kLatents, TaskKind::kToneOnly);
  EXPECT_FALSE(unselected.report.has_value());
  EXPECT_EQ(unselected.absence_reason, "representation not selected");
  const auto& missing = t.at(Representation::kAveragedLatents, TaskKind::kVowelWithTone);
  EXPECT_EQ(missing.absence_reason, "no dataset for task");
}

TEST(ProbeSuite, UnselectedTaskIsMarked) {
  ProbeSuiteConfig cfg = fast_config();
  cfg.tasks = {TaskKind::kToneOnly};
  cfg.representations = {Representation::kDiscreteSymbols};
  const ProbeTable t = run_probe_suite({dataset(TaskKind::kToneOnly)}, 12, cfg);
  EXPECT_EQ(t.at(Representation::kDiscreteSymbols, TaskKind::kVowelWithoutTone).absence_reason,
            "task not selected");
  const auto& cell = t.at(Representation::kDiscreteSymbols, TaskKind::kToneOnly);
  ASSERT_TRUE(cell.report.has_value());
  EXPECT_EQ(cell.report->classes.size(), 5u);
}

TEST(ProbeSuite, ResultsDoNotDependOnThreads) {
  ProbeSuiteConfig cfg = fast_config();
  cfg.tasks = {TaskKind::kVowelWithoutTone};
  const std::vector<ProbeDataset> ds{dataset(TaskKind::kVowelWithoutTone)};
  const ProbeTable a = run_probe_suite(ds, 12, cfg);
  cfg.threads = 3;
  const ProbeTable b = run_probe_suite(ds, 12, cfg);
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    EXPECT_EQ(a.cells[i].loss_trace, b.cells[i].loss_trace);
    if (a.cells[i].report) EXPECT_EQ(a.cells[i].report->f1, b.cells[i].report->f1);
  }
}

TEST(ProbeSuite, StackAveragesPicksRows) {
  const ProbeDataset d = dataset(TaskKind::kToneOnly);
  const Eigen::MatrixXd m = stack_averages(d, {4, 1});
  ASSERT_EQ(m.rows(), 2);
  EXPECT_EQ(m.row(0).transpose(), (*d.items)[4].avg_latent);
  EXPECT_EQ(m.row(1).transpose(), (*d.items)[1].avg_latent);
}

}  // namespace
}  // namespace tonequant

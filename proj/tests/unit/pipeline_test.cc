// tests/unit/pipeline_test.cc

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


#include <filesystem>

#include <gtest/gtest.h>

#include "test_util.h"
#include "tonequant/pipeline.h"

namespace tonequant {
namespace {

namespace fs = std::filesystem;

std::string parse_error(std::string_view text) {
  try {
    parse_pipeline_config(text);
  } catch (const InvalidArgument& e) {
    return e.what();
  }
  return "";
}

TEST(Config, DefaultsAndSeedPropagation) {
  const PipelineConfig c = parse_pipeline_config(R"({"seed": 9, "kmeans": {"k": 10}})");
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.kmeans.k, 10);
  EXPECT_EQ(c.kmeans.seed, 9u);
  EXPECT_EQ(c.synth.seed, 9u);
  EXPECT_EQ(c.probes.lstm_symbols.seed, 9u);
  const PipelineConfig o = parse_pipeline_config("{}", {}, ConfigOverrides{123, 2});
  EXPECT_EQ(o.seed, 123u);
  EXPECT_EQ(o.threads, 2);
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_NE(parse_error(R"({"kmeans": {"clusters": 3}})").find("kmeans.clusters"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"synth": {"dim": "big"}})").find("synth.dim"), std::string::npos);
  EXPECT_NE(parse_error(R"({"corpus": {"source": "files"}})").find("corpus.manifest"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"probes": {"tasks": ["pitch"]}})").find("probes.tasks"),
            std::string::npos);
  EXPECT_FALSE(parse_error("{ not json").empty());
}

TEST(Config, ResolvedDocumentRoundTrips) {
  const PipelineConfig c = load_pipeline_config(TONEQUANT_SOURCE_DIR "/configs/demo.json");
  const std::string doc = pipeline_config_json(c);
  EXPECT_EQ(pipeline_config_json(parse_pipeline_config(doc)), doc);
}

// Files that record the thread count are skipped.
void expect_same_tree(const fs::path& a, const fs::path& b) {
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    const fs::path rel = fs::relative(e.path(), a);
    if (rel == "provenance.json" || rel == "config.resolved.json") continue;
    ASSERT_TRUE(fs::exists(b / rel)) << rel;
    EXPECT_EQ(testing::read_all(e.path()), testing::read_all(b / rel)) << rel;
    ++files;
  }
  EXPECT_GT(files, 10u);
}

TEST(Pipeline, SmokeRunIsReproducible) {
  testing::TempDir dir;
  PipelineConfig c = load_pipeline_config(TONEQUANT_SOURCE_DIR "/configs/smoke.json");
  const PipelineResult r = run_pipeline(c, dir / "one");
  c.threads = 2;
  run_pipeline(c, dir / "two");
  expect_same_tree(dir / "one", dir / "two");
  EXPECT_FALSE(fs::exists(dir / "one" / "INCOMPLETE"));
  for (const char* f : {"f1_summary.csv", "f1_per_class.csv", "f1_reference.csv",
                        "codebook.sslk", "provenance.json", "config.resolved.json",
                        "distance/contrast.csv", "heatmaps/tone-only.pgm"})
    EXPECT_TRUE(fs::exists(dir / "one" / f)) << f;
  ASSERT_TRUE(r.probes.has_value());
  EXPECT_EQ(r.probes->cells.size(), 9u);
  EXPECT_EQ(r.contrast.size(), 3u);
}

TEST(Pipeline, StagedTargetsStopEarly) {
  testing::TempDir dir;
  const PipelineConfig c = load_pipeline_config(TONEQUANT_SOURCE_DIR "/configs/smoke.json");
  const PipelineResult r = run_pipeline(c, dir.path(), PipelineTarget::kCodebook);
  EXPECT_EQ(r.codebook.k(), 16);
  EXPECT_FALSE(r.probes.has_value());
  EXPECT_TRUE(fs::exists(dir / "codebook.sslk"));
  EXPECT_FALSE(fs::exists(dir / "f1_summary.csv"));
}

TEST(Pipeline, FailureLeavesMarkerNamingTheStage) {
  testing::TempDir dir;
  testing::write_all(dir / "manifest.tsv", "u1\tmissing.sslf\n");
  testing::write_all(dir / "align.csv", "utt_id,phone,start_s,end_s\n");
  const PipelineConfig c = parse_pipeline_config(
      R"({"corpus": {"source": "files", "manifest": "manifest.tsv", "alignments": "align.csv"}})",
      dir.path());
  try {
    run_pipeline(c, dir / "out");
    FAIL() << "expected PipelineError";
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.stage(), "corpus");
    EXPECT_NE(std::string(e.what()).find("stage 'corpus' failed"), std::string::npos);
  }
  EXPECT_NE(testing::read_all(dir / "out" / "INCOMPLETE").find("corpus"), std::string::npos);
}

}  // namespace
}  // namespace tonequant

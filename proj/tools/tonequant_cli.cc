// tools/tonequant_cli.cc

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

// Command line front end. Every stage subcommand runs the pipeline up to
// that stage from a JSON config; `report` works on existing outputs.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "tonequant/heatmap.h"
#include "tonequant/pipeline.h"
#include "tonequant/report_io.h"

namespace fs = std::filesystem;
using namespace tonequant;

namespace {

struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out = "tonequant_out";
};

PipelineConfig resolve_config(const GlobalOptions& g) {
  ConfigOverrides o{g.seed, g.threads};
  if (!g.config.empty()) return load_pipeline_config(g.config, o);
  return parse_pipeline_config("{}", fs::current_path(), o);
}

void print_summary(const PipelineResult& r, const fs::path& out) {
  fmt::print("utterances: {}  segments: {}  dropped (non-vowel {}, toneless {}, no frames {})\n",
             r.utterances, r.segmentation.segments.size(), r.segmentation.dropped_non_vowel,
             r.segmentation.dropped_toneless, r.segmentation.dropped_no_frames);
  if (r.codebook.k() > 0)
    fmt::print("codebook: K={} D={} inertia={:.6g} iterations={}\n", r.codebook.k(),
               r.codebook.dim(), r.codebook.inertia, r.codebook.iterations_run);
  if (r.probes) fmt::print("\nmacro F1\n{}", summary_csv(*r.probes));
  if (!r.contrast.empty()) {
    fmt::print("\ndiagonal contrast\n");
    for (const auto& [task, value] : r.contrast) fmt::print("{},{:.4f}\n", task_name(task), value);
  }
  fmt::print("\noutputs in {}\n", out.string());
}

int run_target(const GlobalOptions& g, PipelineTarget target) {
  const PipelineConfig config = resolve_config(g);
  print_summary(run_pipeline(config, g.out, target), g.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tonequant: probe how much vowel and tone information survives k-means "
               "discretization of frame-level speech features"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config, "JSON config file (defaults apply when omitted)")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Override the top-level seed");
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.fallthrough();

  auto* synth = app.add_subcommand("synth", "Generate (or load) and segment the corpus");
  auto* kmeans = app.add_subcommand("kmeans-fit", "Fit the k-means codebook");
  auto* segment = app.add_subcommand("segment", "Build per-phone representations and datasets");
  auto* probe = app.add_subcommand("probe", "Run a probe family");
  probe->require_subcommand(1);
  auto* classify = probe->add_subcommand("classify", "Classification probes and F1 tables");
  auto* editdist = probe->add_subcommand("editdist", "Edit-distance matrices and heatmaps");
  auto* run = app.add_subcommand("run", "Full pipeline");

  auto* report = app.add_subcommand("report", "Reference tables and heatmap rendering");
  std::string language = "mandarin";
  std::string matrix_csv, pgm_out;
  int cell_size = 16;
  report->add_option("--language", language, "mandarin or yoruba")->capture_default_str();
  report->add_option("--matrix", matrix_csv, "Distance CSV to render")->check(CLI::ExistingFile);
  report->add_option("--pgm", pgm_out, "Heatmap output path (default: <out>/<matrix>.pgm)");
  report->add_option("--cell-size", cell_size, "Pixels per cell")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) return run_target(g, PipelineTarget::kCorpus);
    if (*kmeans) return run_target(g, PipelineTarget::kCodebook);
    if (*segment) return run_target(g, PipelineTarget::kDatasets);
    if (*classify) return run_target(g, PipelineTarget::kClassify);
    if (*editdist) return run_target(g, PipelineTarget::kEditDistance);
    if (*run) return run_target(g, PipelineTarget::kFull);
    if (*report) {
      const Language lang = LabelScheme::from_name(language).language();
      fmt::print("{}", reference_table_text(lang));
      if (!matrix_csv.empty()) {
        const DistanceMatrix m = read_distance_csv(matrix_csv);
        fs::path target = pgm_out;
        if (target.empty()) {
          fs::create_directories(g.out);
          target = fs::path(g.out) / fs::path(matrix_csv).filename().replace_extension(".pgm");
        }
        render_heatmap(m, target, HeatmapSpec{cell_size});
        fmt::print("\nheatmap: {}\n", target.string());
        if (m.size() >= 2) fmt::print("diagonal contrast: {:.4f}\n", diagonal_contrast(m));
      }
      return 0;
    }
  } catch (const PipelineError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}

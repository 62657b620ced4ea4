// core/src/report_io.cc

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

#include "tonequant/report_io.h"

#include <fmt/format.h>

#include "binary_io.h"
#include "tonequant/reference.h"

namespace tonequant {

namespace {

std::string score(double v) { return fmt::format("{:.4f}", v); }

}  // namespace

std::string per_class_csv(const ProbeTable& table) {
  std::string out = "representation,task,class,precision,recall,f1\n";
  for (const ProbeCell& cell : table.cells) {
    if (!cell.report) continue;
    const ClassificationReport& r = *cell.report;
    for (std::size_t c = 0; c < r.classes.size(); ++c) {
      out += fmt::format("{},{},{}{},{},{},{}\n", representation_name(cell.representation),
                         task_name(cell.task), r.classes[c],
                         r.absent_from_test[c] ? " (absent)" : "", score(r.precision[c]),
                         score(r.recall[c]), score(r.f1[c]));
    }
  }
  return out;
}

std::string summary_csv(const ProbeTable& table) {
  std::string out = "task";
  for (Representation rep : kAllRepresentations) out += fmt::format(",{}", representation_name(rep));
  out += '\n';
  for (TaskKind task : kAllTasks) {
    out += task_name(task);
    for (Representation rep : kAllRepresentations) {
      const ProbeCell& cell = table.at(rep, task);
      out += cell.report ? "," + score(cell.report->macro_f1) : std::string(",NA");
    }
    out += '\n';
  }
  return out;
}

std::string reference_comparison_csv(const ProbeTable& table, Language language) {
  const auto models = reference_models(language);
  std::string out = "task,representation,local";
  for (auto m : models) out += fmt::format(",{}", m);
  out += '\n';
  for (TaskKind task : kAllTasks) {
    for (Representation rep : kAllRepresentations) {
      const ProbeCell& cell = table.at(rep, task);
      out += fmt::format("{},{},{}", task_name(task), representation_name(rep),
                         cell.report ? score(cell.report->macro_f1) : "NA");
      for (auto m : models) out += fmt::format(",{:.2f}", reference_f1(language, m, task, rep));
      out += '\n';
    }
  }
  return out;
}

std::string reference_table_text(Language language) {
  const auto models = reference_models(language);
  std::string out = fmt::format("Published classification F1 ({})\n",
                                LabelScheme::for_language(language).name());
  out += fmt::format("{:<20}", "");
  for (auto m : models)
    for (Representation rep : kAllRepresentations)
      out += fmt::format(" {:>16}", fmt::format("{}/{}", m.substr(0, 6), representation_name(rep).substr(0, 8)));
  out += '\n';
  for (TaskKind task : kAllTasks) {
    out += fmt::format("{:<20}", task_name(task));
    for (auto m : models)
      for (Representation rep : kAllRepresentations)
        out += fmt::format(" {:>16.2f}", reference_f1(language, m, task, rep));
    out += '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  detail::write_file_bytes(path, std::string_view(text));
}

}  // namespace tonequant

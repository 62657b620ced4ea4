// core/src/reference.cc

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

#include "tonequant/reference.h"

#include <algorithm>

#include <fmt/format.h>

namespace tonequant {

namespace {

constexpr Language M = Language::kMandarin;
constexpr Language Y = Language::kYoruba;
constexpr TaskKind VO = TaskKind::kVowelWithoutTone;
constexpr TaskKind VT = TaskKind::kVowelWithTone;
constexpr TaskKind TO = TaskKind::kToneOnly;
constexpr Representation LAT = Representation::kLatents;
constexpr Representation AVG = Representation::kAveragedLatents;
constexpr Representation SYM = Representation::kDiscreteSymbols;

constexpr ReferenceCell kTable[] = {
    {M, "HuBERT base", VO, LAT, 0.97},    {M, "HuBERT base", VO, AVG, 0.94},
    {M, "HuBERT base", VO, SYM, 0.79},    {M, "MandarinHuBERT", VO, LAT, 0.99},
    {M, "MandarinHuBERT", VO, AVG, 0.98}, {M, "MandarinHuBERT", VO, SYM, 0.86},
    {M, "HuBERT base", VT, LAT, 0.70},    {M, "HuBERT base", VT, AVG, 0.62},
    {M, "HuBERT base", VT, SYM, 0.38},    {M, "MandarinHuBERT", VT, LAT, 0.79},
    {M, "MandarinHuBERT", VT, AVG, 0.74}, {M, "MandarinHuBERT", VT, SYM, 0.46},
    {M, "HuBERT base", TO, LAT, 0.71},    {M, "HuBERT base", TO, AVG, 0.65},
    {M, "HuBERT base", TO, SYM, 0.45},    {M, "MandarinHuBERT", TO, LAT, 0.79},
    {M, "MandarinHuBERT", TO, AVG, 0.76}, {M, "MandarinHuBERT", TO, SYM, 0.49},

    {Y, "HuBERT base", VO, LAT, 0.96},    {Y, "HuBERT base", VO, AVG, 0.92},
    {Y, "HuBERT base", VO, SYM, 0.57},    {Y, "XLS-R", VO, LAT, 0.97},
    {Y, "XLS-R", VO, AVG, 0.96},          {Y, "XLS-R", VO, SYM, 0.60},
    {Y, "HuBERT base", VT, LAT, 0.83},    {Y, "HuBERT base", VT, AVG, 0.78},
    {Y, "HuBERT base", VT, SYM, 0.33},    {Y, "XLS-R", VT, LAT, 0.65},
    {Y, "XLS-R", VT, AVG, 0.86},          {Y, "XLS-R", VT, SYM, 0.37},
    {Y, "HuBERT base", TO, LAT, 0.86},    {Y, "HuBERT base", TO, AVG, 0.74},
    {Y, "HuBERT base", TO, SYM, 0.49},    {Y, "XLS-R", TO, LAT, 0.89},
    {Y, "XLS-R", TO, AVG, 0.82},          {Y, "XLS-R", TO, SYM, 0.52},
};

}  // namespace

std::span<const ReferenceCell> reference_table() { return kTable; }

std::vector<std::string_view> reference_models(Language language) {
  std::vector<std::string_view> out;
  for (const ReferenceCell& c : kTable)
    if (c.language == language && std::find(out.begin(), out.end(), c.model) == out.end())
      out.push_back(c.model);
  return out;
}

double reference_f1(Language language, std::string_view model, TaskKind task,
                    Representation representation) {
  for (const ReferenceCell& c : kTable)
    if (c.language == language && c.model == model && c.task == task &&
        c.representation == representation)
      return c.f1;
  throw InvalidArgument(fmt::format("no reference score for ({}, {}, {}, {})",
                                    LabelScheme::for_language(language).name(), model,
                                    task_name(task), representation_name(representation)));
}

}  // namespace tonequant

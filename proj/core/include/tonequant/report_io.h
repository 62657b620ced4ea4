// tonequant/report_io.h

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

#ifndef TONEQUANT_REPORT_IO_H_
#define TONEQUANT_REPORT_IO_H_

#include <filesystem>
#include <string>

#include "tonequant/probe_suite.h"

namespace tonequant {

/// `representation,task,class,precision,recall,f1`, one row per class of
/// every present cell. Classes missing from the test split get f1 0 and the
/// class name suffixed with " (absent)".
std::string per_class_csv(const ProbeTable& table);

/// `task,Latents,AveragedLatents,DiscreteSymbols` macro F1, tasks in table
/// row order; absent cells read "NA".
std::string summary_csv(const ProbeTable& table);

/// Local macro F1 beside every published reference column for the language:
/// `task,representation,local,<model>...`.
std::string reference_comparison_csv(const ProbeTable& table, Language language);

/// Plain-text table of the published scores for a language.
std::string reference_table_text(Language language);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace tonequant

#endif  // TONEQUANT_REPORT_IO_H_

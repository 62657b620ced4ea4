// tonequant/reference.h

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

#ifndef TONEQUANT_REFERENCE_H_
#define TONEQUANT_REFERENCE_H_

#include <span>
#include <string_view>
#include <vector>

#include "tonequant/corpus.h"
#include "tonequant/represent.h"

namespace tonequant {

/// Published full-scale F1 scores, kept for side-by-side display only.
struct ReferenceCell {
  Language language;
  std::string_view model;
  TaskKind task;
  Representation representation;
  double f1;
};

std::span<const ReferenceCell> reference_table();

/// Models with reference scores for a language, in table column order.
std::vector<std::string_view> reference_models(Language language);

/// Throws InvalidArgument for an unknown key.
double reference_f1(Language language, std::string_view model, TaskKind task,
                    Representation representation);

}  // namespace tonequant

#endif  // TONEQUANT_REFERENCE_H_

// tonequant/train_config.h

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

#ifndef TONEQUANT_TRAIN_CONFIG_H_
#define TONEQUANT_TRAIN_CONFIG_H_

#include <cstdint>

namespace tonequant {

/// How discrete symbols enter the LSTM.
enum class SymbolInput { kEmbedding, kOneHot };

/// Optimisation settings shared by both probe families. Logistic regression
/// is trained full-batch and ignores batch_size and the LSTM-only fields.
struct TrainConfig {
  int epochs = 20;
  double learning_rate = 0.5;
  int batch_size = 32;
  std::uint64_t seed = 0;
  int hidden_size = 128;
  int embed_dim = 64;
  double clip_norm = 5.0;
  double l2 = 0.0;
  SymbolInput symbol_input = SymbolInput::kEmbedding;

  void validate() const;
};

}  // namespace tonequant

#endif  // TONEQUANT_TRAIN_CONFIG_H_

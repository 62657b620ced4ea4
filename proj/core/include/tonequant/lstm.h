// tonequant/lstm.h

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

#ifndef TONEQUANT_LSTM_H_
#define TONEQUANT_LSTM_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "tonequant/common.h"
#include "tonequant/train_config.h"

namespace tonequant {

/// One input sequence: either a dense L x D matrix or L symbol ids. Does not
/// own the data.
struct SequenceInput {
  const FrameMatrix* dense = nullptr;
  const std::vector<int>* symbols = nullptr;

  static SequenceInput of(const FrameMatrix& m) { return {&m, nullptr}; }
  static SequenceInput of(const std::vector<int>& s) { return {nullptr, &s}; }
  Eigen::Index length() const;
};

enum class LstmInputMode { kDense, kEmbedded, kOneHot };

/// All trainable tensors. Gate rows of wx / wh / b are stacked in the order
/// input, forget, cell, output (H rows each).
struct LstmParams {
  Eigen::MatrixXd wx;         // 4H x In
  Eigen::MatrixXd wh;         // 4H x H
  Eigen::VectorXd b;          // 4H
  Eigen::MatrixXd wy;         // C x H
  Eigen::VectorXd by;         // C
  Eigen::MatrixXd embedding;  // K x E (embedded mode only, else empty)

  struct View {
    std::string_view name;
    double* data;
    Eigen::Index size;
  };
  /// Flat views of every tensor, in a fixed order.
  std::vector<View> views();
  void set_zero_like(const LstmParams& other);
  double squared_norm() const;
};

/// Single-layer LSTM sequence classifier. The final hidden state of each
/// sequence (its true last step; padding never reaches the readout) goes
/// through an affine layer and a softmax.
class LstmModel {
 public:
  /// `vocabulary_or_dim` is D for dense input and K for symbol input.
  LstmModel(LstmInputMode mode, int vocabulary_or_dim, int hidden_size, int embed_dim,
            int num_classes, std::uint64_t seed);

  LstmInputMode mode() const { return mode_; }
  int hidden_size() const { return hidden_; }
  int num_classes() const { return classes_; }
  int input_width() const { return input_width_; }
  int vocabulary_or_dim() const { return vocab_or_dim_; }

  LstmParams& params() { return params_; }
  const LstmParams& params() const { return params_; }

  /// Mean cross-entropy over the batch; fills `grads` (same shapes as the
  /// parameters) by backpropagation through time when non-null.
  double loss(const std::vector<SequenceInput>& batch, const std::vector<int>& labels,
              LstmParams* grads = nullptr) const;

  Eigen::MatrixXd predict_proba(const std::vector<SequenceInput>& inputs) const;
  std::vector<int> predict(const std::vector<SequenceInput>& inputs) const;

 private:
  struct Tape;
  Eigen::MatrixXd forward(const std::vector<SequenceInput>& batch, Tape* tape) const;
  void step_input(const std::vector<SequenceInput>& batch, Eigen::Index t,
                  Eigen::MatrixXd& x) const;
  void validate(const std::vector<SequenceInput>& batch) const;

  LstmInputMode mode_;
  int vocab_or_dim_;
  int input_width_;
  int hidden_;
  int classes_;
  LstmParams params_;
};

struct LstmTrainResult {
  LstmModel model;
  std::vector<double> epoch_loss;  // mean minibatch loss per epoch
};

/// Mini-batch gradient descent with global-norm clipping. Each epoch visits
/// the training items in a seeded permutation; deterministic for a fixed
/// config.seed.
LstmTrainResult train_lstm(const std::vector<SequenceInput>& inputs,
                           const std::vector<int>& labels, int num_classes,
                           LstmInputMode mode, int vocabulary_or_dim,
                           const TrainConfig& config);

}  // namespace tonequant

#endif  // TONEQUANT_LSTM_H_

// tonequant/logreg.h

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

#ifndef TONEQUANT_LOGREG_H_
#define TONEQUANT_LOGREG_H_

#include <vector>

#include <Eigen/Core>

#include "tonequant/train_config.h"

namespace tonequant {

/// Multinomial logistic regression: p(c | x) = softmax(W x + b)_c.
struct LogRegModel {
  Eigen::MatrixXd weights;  // C x D
  Eigen::VectorXd bias;     // C
  std::vector<double> loss_history;  // training loss before each epoch, then final

  int num_classes() const { return static_cast<int>(weights.rows()); }
  int dim() const { return static_cast<int>(weights.cols()); }

  /// Row-wise class probabilities for an N x D input.
  Eigen::MatrixXd predict_proba(const Eigen::MatrixXd& x) const;
  std::vector<int> predict(const Eigen::MatrixXd& x) const;
};

/// Row-wise numerically stable softmax.
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits);

/// Mean cross-entropy plus 0.5 * l2 * |W|^2. Fills the gradients when the
/// output pointers are non-null.
double logreg_loss(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias,
                   const Eigen::MatrixXd& x, const std::vector<int>& labels, double l2,
                   Eigen::MatrixXd* grad_weights = nullptr,
                   Eigen::VectorXd* grad_bias = nullptr);

/// Upper bound on the Lipschitz constant of the loss gradient; gradient
/// descent with a step at most 1 / bound never increases the loss.
double logreg_smoothness_bound(const Eigen::MatrixXd& x, double l2);

/// Full-batch gradient descent from zero weights for config.epochs steps.
LogRegModel train_logreg(const Eigen::MatrixXd& x, const std::vector<int>& labels,
                         int num_classes, const TrainConfig& config);

}  // namespace tonequant

#endif  // TONEQUANT_LOGREG_H_

// core/src/logreg.cc

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

#include "tonequant/logreg.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "tonequant/common.h"

namespace tonequant {

void TrainConfig::validate() const {
  if (epochs < 1) throw InvalidArgument("train config: epochs must be positive");
  if (!(learning_rate > 0.0))
    throw InvalidArgument("train config: learning_rate must be positive");
  if (batch_size < 1) throw InvalidArgument("train config: batch_size must be positive");
  if (hidden_size < 1) throw InvalidArgument("train config: hidden_size must be positive");
  if (embed_dim < 1) throw InvalidArgument("train config: embed_dim must be positive");
  if (!(clip_norm > 0.0)) throw InvalidArgument("train config: clip_norm must be positive");
  if (!(l2 >= 0.0)) throw InvalidArgument("train config: l2 must be non-negative");
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd p = logits;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    const double m = p.row(i).maxCoeff();
    p.row(i) = (p.row(i).array() - m).exp();
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

Eigen::MatrixXd LogRegModel::predict_proba(const Eigen::MatrixXd& x) const {
  if (x.cols() != weights.cols())
    throw InvalidArgument(fmt::format("logistic regression expects {} features, got {}",
                                      weights.cols(), x.cols()));
  Eigen::MatrixXd logits = x * weights.transpose();
  logits.rowwise() += bias.transpose();
  return softmax_rows(logits);
}

std::vector<int> LogRegModel::predict(const Eigen::MatrixXd& x) const {
  const Eigen::MatrixXd p = predict_proba(x);
  std::vector<int> out(static_cast<std::size_t>(p.rows()));
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    Eigen::Index best = 0;
    p.row(i).maxCoeff(&best);
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

double logreg_loss(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias,
                   const Eigen::MatrixXd& x, const std::vector<int>& labels, double l2,
                   Eigen::MatrixXd* grad_weights, Eigen::VectorXd* grad_bias) {
  const Eigen::Index n = x.rows();
  if (n == 0) throw InvalidArgument("logistic regression: empty batch");
  if (static_cast<Eigen::Index>(labels.size()) != n)
    throw InvalidArgument("logistic regression: label count differs from rows");

  Eigen::MatrixXd logits = x * weights.transpose();
  logits.rowwise() += bias.transpose();
  Eigen::MatrixXd p = softmax_rows(logits);

  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    // log p_y computed from logits to avoid log(0).
    const double m = logits.row(i).maxCoeff();
    const double lse = m + std::log((logits.row(i).array() - m).exp().sum());
    loss += lse - logits(i, y);
    p(i, y) -= 1.0;  // p becomes dL/dlogits * n
  }
  loss /= static_cast<double>(n);
  loss += 0.5 * l2 * weights.squaredNorm();

  if (grad_weights) *grad_weights = p.transpose() * x / static_cast<double>(n) + l2 * weights;
  if (grad_bias) *grad_bias = p.colwise().sum().transpose() / static_cast<double>(n);
  return loss;
}

double logreg_smoothness_bound(const Eigen::MatrixXd& x, double l2) {
  Eigen::MatrixXd aug(x.rows(), x.cols() + 1);
  aug << x, Eigen::VectorXd::Ones(x.rows());
  const Eigen::MatrixXd gram = aug.transpose() * aug / static_cast<double>(x.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  return 0.5 * eig.eigenvalues().maxCoeff() + l2;
}

LogRegModel train_logreg(const Eigen::MatrixXd& x, const std::vector<int>& labels,
                         int num_classes, const TrainConfig& config) {
  config.validate();
  if (x.rows() == 0) throw InvalidArgument("logistic regression: empty training split");
  if (num_classes < 2)
    throw InvalidArgument("logistic regression: need at least two classes");
  for (int y : labels)
    if (y < 0 || y >= num_classes)
      throw InvalidArgument(fmt::format("logistic regression: label {} out of range", y));
  if (std::all_of(labels.begin(), labels.end(), [&](int y) { return y == labels.front(); }))
    throw InvalidArgument("logistic regression: training split contains a single class");

  LogRegModel model;
  model.weights = Eigen::MatrixXd::Zero(num_classes, x.cols());
  model.bias = Eigen::VectorXd::Zero(num_classes);
  Eigen::MatrixXd gw;
  Eigen::VectorXd gb;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    model.loss_history.push_back(
        logreg_loss(model.weights, model.bias, x, labels, config.l2, &gw, &gb));
    model.weights -= config.learning_rate * gw;
    model.bias -= config.learning_rate * gb;
  }
  model.loss_history.push_back(logreg_loss(model.weights, model.bias, x, labels, config.l2));
  return model;
}

}  // namespace tonequant

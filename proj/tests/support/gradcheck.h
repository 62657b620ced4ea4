// tests/support/gradcheck.h

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


#ifndef TONEQUANT_TESTS_GRADCHECK_H_
#define TONEQUANT_TESTS_GRADCHECK_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "tonequant/logreg.h"
#include "tonequant/lstm.h"

namespace tonequant::testing {

// Denominator floor for the relative error. Components whose analytic and
// numeric values are both below it are compared on an absolute scale.
inline constexpr double kGradFloor = 1e-3;
inline constexpr double kGradStep = 1e-5;

inline double relative_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), kGradFloor});
  return std::abs(analytic - numeric) / denom;
}

// Central difference of `loss` with respect to *x.
inline double central_difference(double* x, const std::function<double()>& loss) {
  const double saved = *x;
  *x = saved + kGradStep;
  const double up = loss();
  *x = saved - kGradStep;
  const double down = loss();
  *x = saved;
  return (up - down) / (2.0 * kGradStep);
}

/// Max relative error over every parameter of the model.
inline double lstm_gradient_error(LstmModel& model, const std::vector<SequenceInput>& batch,
                                  const std::vector<int>& labels) {
  LstmParams grads;
  model.loss(batch, labels, &grads);
  auto analytic = grads.views();
  auto params = model.params().views();
  double worst = 0.0;
  for (std::size_t v = 0; v < params.size(); ++v)
    for (Eigen::Index i = 0; i < params[v].size; ++i) {
      const double numeric =
          central_difference(params[v].data + i, [&] { return model.loss(batch, labels); });
      worst = std::max(worst, relative_error(analytic[v].data[i], numeric));
    }
  return worst;
}

inline double logreg_gradient_error(Eigen::MatrixXd w, Eigen::VectorXd b,
                                    const Eigen::MatrixXd& x, const std::vector<int>& labels,
                                    double l2) {
  Eigen::MatrixXd gw;
  Eigen::VectorXd gb;
  logreg_loss(w, b, x, labels, l2, &gw, &gb);
  auto loss = [&] { return logreg_loss(w, b, x, labels, l2); };
  double worst = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    worst = std::max(worst, relative_error(gw.data()[i], central_difference(w.data() + i, loss)));
  for (Eigen::Index i = 0; i < b.size(); ++i)
    worst = std::max(worst, relative_error(gb(i), central_difference(b.data() + i, loss)));
  return worst;
}

/// Random small LSTM problem: mode cycles with `instance`, lengths vary in
/// [1, 6] so padding is exercised.
struct LstmInstance {
  std::vector<FrameMatrix> dense;
  std::vector<std::vector<int>> symbols;
  std::vector<SequenceInput> batch;
  std::vector<int> labels;
  LstmInputMode mode;
  int width;
};

inline LstmInstance make_lstm_instance(int instance, int batch_size, int classes) {
  static constexpr LstmInputMode kModes[] = {LstmInputMode::kDense, LstmInputMode::kEmbedded,
                                             LstmInputMode::kOneHot};
  std::mt19937_64 rng(static_cast<std::uint64_t>(1000 + instance));
  LstmInstance p;
  p.mode = kModes[instance % 3];
  p.width = p.mode == LstmInputMode::kDense ? 3 : 5;
  std::uniform_int_distribution<int> len(1, 6), sym(0, p.width - 1), cls(0, classes - 1);
  std::normal_distribution<float> n(0.0f, 1.0f);
  p.dense.resize(static_cast<std::size_t>(batch_size));
  p.symbols.resize(static_cast<std::size_t>(batch_size));
  for (int b = 0; b < batch_size; ++b) {
    const int l = len(rng);
    auto ub = static_cast<std::size_t>(b);
    if (p.mode == LstmInputMode::kDense) {
      p.dense[ub].resize(l, p.width);
      for (Eigen::Index i = 0; i < p.dense[ub].size(); ++i) p.dense[ub].data()[i] = n(rng);
    } else {
      for (int t = 0; t < l; ++t) p.symbols[ub].push_back(sym(rng));
    }
    p.labels.push_back(cls(rng));
  }
  for (int b = 0; b < batch_size; ++b) {
    auto ub = static_cast<std::size_t>(b);
    p.batch.push_back(p.mode == LstmInputMode::kDense ? SequenceInput::of(p.dense[ub])
                                                      : SequenceInput::of(p.symbols[ub]));
  }
  return p;
}

}  // namespace tonequant::testing

#endif  // TONEQUANT_TESTS_GRADCHECK_H_

// core/src/metrics.cc

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

#include "tonequant/metrics.h"

#include <fmt/format.h>

#include "tonequant/common.h"

namespace tonequant {

ClassificationReport report_from_confusion(const ConfusionMatrix& confusion,
                                           std::vector<std::string> classes) {
  const Eigen::Index c = confusion.rows();
  if (c == 0 || confusion.cols() != c)
    throw InvalidArgument("confusion matrix must be square and non-empty");
  if (static_cast<Eigen::Index>(classes.size()) != c)
    throw InvalidArgument(fmt::format("{} class names for a {}x{} confusion matrix",
                                      classes.size(), c, c));
  const std::int64_t total = confusion.sum();
  if (total <= 0) throw InvalidArgument("empty test split");

  ClassificationReport r;
  r.classes = std::move(classes);
  r.confusion = confusion;
  r.precision.assign(static_cast<std::size_t>(c), 0.0);
  r.recall.assign(static_cast<std::size_t>(c), 0.0);
  r.f1.assign(static_cast<std::size_t>(c), 0.0);
  r.absent_from_test.assign(static_cast<std::size_t>(c), false);

  double f1_sum = 0.0;
  for (Eigen::Index k = 0; k < c; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const double tp = static_cast<double>(confusion(k, k));
    const double actual = static_cast<double>(confusion.row(k).sum());
    const double predicted = static_cast<double>(confusion.col(k).sum());
    r.absent_from_test[i] = actual == 0.0;
    r.precision[i] = predicted > 0.0 ? tp / predicted : 0.0;
    r.recall[i] = actual > 0.0 ? tp / actual : 0.0;
    const double pr = r.precision[i] + r.recall[i];
    r.f1[i] = pr > 0.0 ? 2.0 * r.precision[i] * r.recall[i] / pr : 0.0;
    f1_sum += r.f1[i];
  }
  r.macro_f1 = f1_sum / static_cast<double>(c);
  r.accuracy = static_cast<double>(confusion.trace()) / static_cast<double>(total);
  return r;
}

ClassificationReport evaluate_predictions(const std::vector<int>& truth,
                                          const std::vector<int>& predicted,
                                          std::vector<std::string> classes) {
  if (truth.size() != predicted.size())
    throw InvalidArgument("truth and prediction lengths differ");
  if (truth.empty()) throw InvalidArgument("empty test split");
  const auto c = static_cast<Eigen::Index>(classes.size());
  ConfusionMatrix confusion = ConfusionMatrix::Zero(c, c);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= c || predicted[i] < 0 || predicted[i] >= c)
      throw InvalidArgument(fmt::format("label out of range at item {}", i));
    ++confusion(truth[i], predicted[i]);
  }
  return report_from_confusion(confusion, std::move(classes));
}

}  // namespace tonequant

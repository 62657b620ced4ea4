// tonequant/metrics.h

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

#ifndef TONEQUANT_METRICS_H_
#define TONEQUANT_METRICS_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace tonequant {

using ConfusionMatrix =
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;  // rows: truth

struct ClassificationReport {
  std::vector<std::string> classes;
  ConfusionMatrix confusion;
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f1;
  // Classes with no test items; they score F1 = 0 and still count in the
  // macro average.
  std::vector<bool> absent_from_test;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
};

/// Per-class precision / recall / F1 from a confusion matrix (rows are true
/// classes, columns predictions). Undefined ratios are 0.
ClassificationReport report_from_confusion(const ConfusionMatrix& confusion,
                                           std::vector<std::string> classes);

ClassificationReport evaluate_predictions(const std::vector<int>& truth,
                                          const std::vector<int>& predicted,
                                          std::vector<std::string> classes);

}  // namespace tonequant

#endif  // TONEQUANT_METRICS_H_

// tonequant/probe_suite.h

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

#ifndef TONEQUANT_PROBE_SUITE_H_
#define TONEQUANT_PROBE_SUITE_H_

#include <optional>
#include <string>
#include <vector>

#include "tonequant/corpus.h"
#include "tonequant/logreg.h"
#include "tonequant/lstm.h"
#include "tonequant/metrics.h"
#include "tonequant/represent.h"

namespace tonequant {

/// Probe settings per representation. Latents and discrete symbols go through
/// an LSTM, averaged latents through logistic regression.
struct ProbeSuiteConfig {
  TrainConfig lstm_latents;
  TrainConfig lstm_symbols;
  TrainConfig logreg{.epochs = 500, .learning_rate = 1.0};
  std::vector<Representation> representations{std::begin(kAllRepresentations),
                                              std::end(kAllRepresentations)};
  std::vector<TaskKind> tasks{std::begin(kAllTasks), std::end(kAllTasks)};
  int threads = 1;
};

struct ProbeCell {
  Representation representation = Representation::kLatents;
  TaskKind task = TaskKind::kVowelWithoutTone;
  std::optional<ClassificationReport> report;  // unset when absent
  std::string absence_reason;
  std::vector<double> loss_trace;
};

/// Table keyed (representation, task); cells come in kAllTasks-major order,
/// representations in kAllRepresentations order within each task.
struct ProbeTable {
  std::vector<ProbeCell> cells;

  const ProbeCell& at(Representation representation, TaskKind task) const;
};

/// Test-split report of a trained model on its own dataset.
ClassificationReport evaluate(const LogRegModel& model, const ProbeDataset& dataset);
ClassificationReport evaluate(const LstmModel& model, const ProbeDataset& dataset,
                              Representation representation);

/// Rows of averaged latents (N x D) for the given item indices.
Eigen::MatrixXd stack_averages(const ProbeDataset& dataset,
                               const std::vector<std::size_t>& indices);

/// Trains and evaluates one probe.
ProbeCell run_probe(const ProbeDataset& dataset, Representation representation,
                    int codebook_size, const ProbeSuiteConfig& config);

/// Runs every selected (representation, task) cell. `datasets` holds at most
/// one dataset per task; a task without one, or an unselected representation,
/// yields a cell with an absence reason. Cells train in parallel.
ProbeTable run_probe_suite(const std::vector<ProbeDataset>& datasets, int codebook_size,
                           const ProbeSuiteConfig& config);

}  // namespace tonequant

#endif  // TONEQUANT_PROBE_SUITE_H_

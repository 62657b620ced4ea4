// core/src/probe_suite.cc

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

#include "tonequant/probe_suite.h"

#include <algorithm>

#include <fmt/format.h>

#include "tonequant/parallel.h"

namespace tonequant {

namespace {

std::vector<int> labels_of(const ProbeDataset& dataset, const std::vector<std::size_t>& idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(dataset.labels[i]);
  return out;
}

std::vector<SequenceInput> sequences_of(const ProbeDataset& dataset,
                                        const std::vector<std::size_t>& idx,
                                        Representation representation) {
  std::vector<SequenceInput> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) {
    const PhoneRepresentation& item = (*dataset.items)[i];
    out.push_back(representation == Representation::kLatents
                      ? SequenceInput::of(item.latent_seq)
                      : SequenceInput::of(item.symbol_seq));
  }
  return out;
}

ClassificationReport test_report(const ProbeDataset& dataset,
                                 const std::vector<std::size_t>& test,
                                 const std::vector<int>& predicted) {
  if (test.empty()) throw InvalidArgument("evaluate: empty test split");
  return evaluate_predictions(labels_of(dataset, test), predicted, dataset.classes);
}

LstmInputMode symbol_mode(const TrainConfig& config) {
  return config.symbol_input == SymbolInput::kOneHot ? LstmInputMode::kOneHot
                                                     : LstmInputMode::kEmbedded;
}

}  // namespace

const ProbeCell& ProbeTable::at(Representation representation, TaskKind task) const {
  for (const ProbeCell& c : cells)
    if (c.representation == representation && c.task == task) return c;
  throw InvalidArgument(fmt::format("probe table has no cell ({}, {})",
                                    representation_name(representation), task_name(task)));
}

Eigen::MatrixXd stack_averages(const ProbeDataset& dataset,
                               const std::vector<std::size_t>& indices) {
  if (indices.empty()) return {};
  const Eigen::Index d = (*dataset.items)[indices.front()].avg_latent.size();
  Eigen::MatrixXd x(static_cast<Eigen::Index>(indices.size()), d);
  for (std::size_t r = 0; r < indices.size(); ++r)
    x.row(static_cast<Eigen::Index>(r)) = (*dataset.items)[indices[r]].avg_latent.transpose();
  return x;
}

ClassificationReport evaluate(const LogRegModel& model, const ProbeDataset& dataset) {
  if (model.num_classes() != dataset.num_classes())
    throw InvalidArgument("evaluate: model and dataset class counts differ");
  const auto test = dataset.indices(Split::kTest);
  if (test.empty()) throw InvalidArgument("evaluate: empty test split");
  return test_report(dataset, test, model.predict(stack_averages(dataset, test)));
}

ClassificationReport evaluate(const LstmModel& model, const ProbeDataset& dataset,
                              Representation representation) {
  if (model.num_classes() != dataset.num_classes())
    throw InvalidArgument("evaluate: model and dataset class counts differ");
  if (representation == Representation::kAveragedLatents)
    throw InvalidArgument("evaluate: averaged latents are not a sequence view");
  const auto test = dataset.indices(Split::kTest);
  if (test.empty()) throw InvalidArgument("evaluate: empty test split");
  return test_report(dataset, test, model.predict(sequences_of(dataset, test, representation)));
}

ProbeCell run_probe(const ProbeDataset& dataset, Representation representation,
                    int codebook_size, const ProbeSuiteConfig& config) {
  ProbeCell cell;
  cell.representation = representation;
  cell.task = dataset.task;
  const auto train = dataset.indices(Split::kTrain);
  const auto labels = labels_of(dataset, train);

  switch (representation) {
    case Representation::kAveragedLatents: {
      LogRegModel model =
          train_logreg(stack_averages(dataset, train), labels, dataset.num_classes(), config.logreg);
      cell.loss_trace = model.loss_history;
      cell.report = evaluate(model, dataset);
      break;
    }
    case Representation::kLatents: {
      if (train.empty()) throw InvalidArgument("probe: empty training split");
      const int dim = static_cast<int>((*dataset.items)[train.front()].latent_seq.cols());
      LstmTrainResult fit = train_lstm(sequences_of(dataset, train, representation), labels,
                                       dataset.num_classes(), LstmInputMode::kDense, dim,
                                       config.lstm_latents);
      cell.loss_trace = std::move(fit.epoch_loss);
      cell.report = evaluate(fit.model, dataset, representation);
      break;
    }
    case Representation::kDiscreteSymbols: {
      if (codebook_size < 1) throw InvalidArgument("probe: symbol input needs a codebook size");
      LstmTrainResult fit = train_lstm(sequences_of(dataset, train, representation), labels,
                                       dataset.num_classes(), symbol_mode(config.lstm_symbols),
                                       codebook_size, config.lstm_symbols);
      cell.loss_trace = std::move(fit.epoch_loss);
      cell.report = evaluate(fit.model, dataset, representation);
      break;
    }
  }
  return cell;
}

ProbeTable run_probe_suite(const std::vector<ProbeDataset>& datasets, int codebook_size,
                           const ProbeSuiteConfig& config) {
  ProbeTable table;
  std::vector<std::pair<const ProbeDataset*, std::size_t>> jobs;
  for (TaskKind task : kAllTasks) {
    const bool task_selected =
        std::find(config.tasks.begin(), config.tasks.end(), task) != config.tasks.end();
    const ProbeDataset* dataset = nullptr;
    for (const ProbeDataset& d : datasets) {
      if (d.task != task) continue;
      if (dataset) throw InvalidArgument(fmt::format("two datasets for task {}", task_name(task)));
      dataset = &d;
    }
    for (Representation rep : kAllRepresentations) {
      ProbeCell cell;
      cell.representation = rep;
      cell.task = task;
      const bool rep_selected = std::find(config.representations.begin(),
                                          config.representations.end(),
                                          rep) != config.representations.end();
      if (!task_selected) {
        cell.absence_reason = "task not selected";
      } else if (!rep_selected) {
        cell.absence_reason = "representation not selected";
      } else if (!dataset) {
        cell.absence_reason = "no dataset for task";
      } else {
        jobs.emplace_back(dataset, table.cells.size());
      }
      table.cells.push_back(std::move(cell));
    }
  }
  parallel_for(jobs.size(), config.threads, [&](std::size_t j) {
    ProbeCell& slot = table.cells[jobs[j].second];
    slot = run_probe(*jobs[j].first, slot.representation, codebook_size, config);
  });
  return table;
}

}  // namespace tonequant

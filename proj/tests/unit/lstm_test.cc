// tests/unit/lstm_test.cc

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


#include <random>

#include <gtest/gtest.h>

#include "gradcheck.h"
#include "tonequant/lstm.h"
#include "tonequant/metrics.h"

namespace tonequant {
namespace {

using testing::make_lstm_instance;

// Random symbol sequences labelled by their first symbol, so the readout
// must carry information across the whole sequence.
struct FirstSymbolTask {
  std::vector<std::vector<int>> seqs;
  std::vector<int> labels;
  std::vector<SequenceInput> inputs() const {
    std::vector<SequenceInput> out;
    for (const auto& s : seqs) out.push_back(SequenceInput::of(s));
    return out;
  }
};

FirstSymbolTask first_symbol_task(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> len(2, 6), sym(0, 3);
  FirstSymbolTask t;
  for (int i = 0; i < n; ++i) {
    std::vector<int> s;
    const int l = len(rng);
    for (int j = 0; j < l; ++j) s.push_back(sym(rng));
    t.labels.push_back(s[0] % 3);
    t.seqs.push_back(std::move(s));
  }
  return t;
}

TrainConfig small_config() {
  TrainConfig cfg;
  cfg.epochs = 30;
  cfg.learning_rate = 1.0;
  cfg.batch_size = 16;
  cfg.hidden_size = 16;
  cfg.embed_dim = 8;
  cfg.seed = 5;
  return cfg;
}

TEST(Lstm, LearnsTheFirstSymbol) {
  const FirstSymbolTask train = first_symbol_task(600, 1), test = first_symbol_task(200, 2);
  for (LstmInputMode mode : {LstmInputMode::kEmbedded, LstmInputMode::kOneHot}) {
    const auto r = train_lstm(train.inputs(), train.labels, 3, mode, 4, small_config());
    const auto report =
        evaluate_predictions(test.labels, r.model.predict(test.inputs()), {"0", "1", "2"});
    EXPECT_GE(report.macro_f1, 0.95) << static_cast<int>(mode);
    EXPECT_LT(r.epoch_loss.back(), r.epoch_loss.front());
  }
}

TEST(Lstm, RandomLabelsScoreNearChance) {
  FirstSymbolTask train = first_symbol_task(600, 3), test = first_symbol_task(600, 4);
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> cls(0, 2);
  for (int& y : train.labels) y = cls(rng);
  for (int& y : test.labels) y = cls(rng);
  TrainConfig cfg = small_config();
  cfg.epochs = 5;
  const auto r = train_lstm(train.inputs(), train.labels, 3, LstmInputMode::kEmbedded, 4, cfg);
  const auto report =
      evaluate_predictions(test.labels, r.model.predict(test.inputs()), {"0", "1", "2"});
  EXPECT_LT(report.accuracy, 0.45);
}

TEST(Lstm, GradientsMatchFiniteDifferencesInEveryMode) {
  for (int instance = 0; instance < 6; ++instance) {
    auto p = make_lstm_instance(instance, 4, 3);
    LstmModel model(p.mode, p.width, 3, 2, 3, static_cast<std::uint64_t>(instance));
    EXPECT_LE(testing::lstm_gradient_error(model, p.batch, p.labels), 1e-4) << instance;
  }
}

TEST(Lstm, PaddingDoesNotChangeASequence) {
  std::vector<int> short_seq{1, 2}, long_seq{0, 1, 2, 3, 0, 1, 2};
  LstmModel model(LstmInputMode::kEmbedded, 4, 5, 3, 2, 11);
  const Eigen::MatrixXd alone = model.predict_proba({SequenceInput::of(short_seq)});
  const Eigen::MatrixXd batched =
      model.predict_proba({SequenceInput::of(long_seq), SequenceInput::of(short_seq)});
  EXPECT_LT((alone.row(0) - batched.row(1)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Lstm, TrainingIsDeterministic) {
  const FirstSymbolTask t = first_symbol_task(100, 6);
  TrainConfig cfg = small_config();
  cfg.epochs = 3;
  const auto a = train_lstm(t.inputs(), t.labels, 3, LstmInputMode::kOneHot, 4, cfg);
  const auto b = train_lstm(t.inputs(), t.labels, 3, LstmInputMode::kOneHot, 4, cfg);
  EXPECT_EQ(a.epoch_loss, b.epoch_loss);
  EXPECT_EQ(a.model.params().wx, b.model.params().wx);
}

TEST(Lstm, RejectsBadInput) {
  LstmModel model(LstmInputMode::kEmbedded, 4, 3, 2, 2, 1);
  std::vector<int> bad{0, 7}, empty;
  EXPECT_THROW(model.predict({SequenceInput::of(bad)}), InvalidArgument);
  EXPECT_THROW(model.predict({SequenceInput::of(empty)}), InvalidArgument);
  FrameMatrix dense(2, 4);
  EXPECT_THROW(model.predict({SequenceInput::of(dense)}), InvalidArgument);
}

}  // namespace
}  // namespace tonequant

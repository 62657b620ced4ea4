// core/src/lstm.cc

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

#include "tonequant/lstm.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "tonequant/logreg.h"

namespace tonequant {

Eigen::Index SequenceInput::length() const {
  if (dense) return dense->rows();
  if (symbols) return static_cast<Eigen::Index>(symbols->size());
  return 0;
}

std::vector<LstmParams::View> LstmParams::views() {
  std::vector<View> out{{"wx", wx.data(), wx.size()},
                        {"wh", wh.data(), wh.size()},
                        {"b", b.data(), b.size()},
                        {"wy", wy.data(), wy.size()},
                        {"by", by.data(), by.size()}};
  if (embedding.size() > 0) out.push_back({"embedding", embedding.data(), embedding.size()});
  return out;
}

void LstmParams::set_zero_like(const LstmParams& other) {
  wx.setZero(other.wx.rows(), other.wx.cols());
  wh.setZero(other.wh.rows(), other.wh.cols());
  b.setZero(other.b.size());
  wy.setZero(other.wy.rows(), other.wy.cols());
  by.setZero(other.by.size());
  embedding.setZero(other.embedding.rows(), other.embedding.cols());
}

double LstmParams::squared_norm() const {
  return wx.squaredNorm() + wh.squaredNorm() + b.squaredNorm() + wy.squaredNorm() +
         by.squaredNorm() + embedding.squaredNorm();
}

namespace {

Eigen::ArrayXXd sigmoid(const Eigen::ArrayXXd& z) { return (1.0 + (-z).exp()).inverse(); }

}  // namespace

LstmModel::LstmModel(LstmInputMode mode, int vocabulary_or_dim, int hidden_size,
                     int embed_dim, int num_classes, std::uint64_t seed)
    : mode_(mode),
      vocab_or_dim_(vocabulary_or_dim),
      input_width_(mode == LstmInputMode::kEmbedded ? embed_dim : vocabulary_or_dim),
      hidden_(hidden_size),
      classes_(num_classes) {
  if (vocabulary_or_dim < 1 || hidden_size < 1 || num_classes < 2 ||
      (mode == LstmInputMode::kEmbedded && embed_dim < 1))
    throw InvalidArgument(fmt::format(
        "invalid LSTM shape (input {}, hidden {}, embed {}, classes {})", vocabulary_or_dim,
        hidden_size, embed_dim, num_classes));

  std::mt19937_64 rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(hidden_size));
  std::uniform_real_distribution<double> uniform(-scale, scale);
  auto fill = [&](auto& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = uniform(rng);
  };
  const int h = hidden_size;
  params_.wx.resize(4 * h, input_width_);
  params_.wh.resize(4 * h, h);
  params_.b.resize(4 * h);
  params_.wy.resize(num_classes, h);
  params_.by.resize(num_classes);
  fill(params_.wx);
  fill(params_.wh);
  fill(params_.b);
  fill(params_.wy);
  fill(params_.by);
  params_.b.segment(h, h).setConstant(1.0);  // forget gate
  if (mode == LstmInputMode::kEmbedded) {
    std::normal_distribution<double> normal(0.0, 1.0);
    params_.embedding.resize(vocabulary_or_dim, embed_dim);
    for (Eigen::Index i = 0; i < params_.embedding.size(); ++i)
      params_.embedding.data()[i] = normal(rng);
  }
}

struct LstmModel::Tape {
  struct Step {
    Eigen::MatrixXd x, h_prev, c_prev, i, f, g, o, tanh_c;
    std::vector<char> active;
  };
  std::vector<Step> steps;
  Eigen::MatrixXd h_final;
};

void LstmModel::validate(const std::vector<SequenceInput>& batch) const {
  if (batch.empty()) throw InvalidArgument("LSTM: empty batch");
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const SequenceInput& s = batch[b];
    if (s.length() == 0) throw InvalidArgument(fmt::format("LSTM: sequence {} has length 0", b));
    if (mode_ == LstmInputMode::kDense) {
      if (!s.dense) throw InvalidArgument("LSTM: dense model given symbol input");
      if (s.dense->cols() != vocab_or_dim_)
        throw InvalidArgument(fmt::format("LSTM: sequence {} has dimension {}, expected {}", b,
                                          s.dense->cols(), vocab_or_dim_));
    } else {
      if (!s.symbols) throw InvalidArgument("LSTM: symbol model given dense input");
      for (int sym : *s.symbols)
        if (sym < 0 || sym >= vocab_or_dim_)
          throw InvalidArgument(fmt::format("LSTM: symbol {} outside [0, {})", sym, vocab_or_dim_));
    }
  }
}

void LstmModel::step_input(const std::vector<SequenceInput>& batch, Eigen::Index t,
                           Eigen::MatrixXd& x) const {
  x.setZero(static_cast<Eigen::Index>(batch.size()), input_width_);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const SequenceInput& s = batch[b];
    if (t >= s.length()) continue;
    const auto row = static_cast<Eigen::Index>(b);
    switch (mode_) {
      case LstmInputMode::kDense:
        x.row(row) = s.dense->row(t).cast<double>();
        break;
      case LstmInputMode::kEmbedded:
        x.row(row) = params_.embedding.row((*s.symbols)[static_cast<std::size_t>(t)]);
        break;
      case LstmInputMode::kOneHot:
        x(row, (*s.symbols)[static_cast<std::size_t>(t)]) = 1.0;
        break;
    }
  }
}

Eigen::MatrixXd LstmModel::forward(const std::vector<SequenceInput>& batch, Tape* tape) const {
  const auto n = static_cast<Eigen::Index>(batch.size());
  const Eigen::Index h = hidden_;
  Eigen::Index steps = 0;
  for (const auto& s : batch) steps = std::max(steps, s.length());

  Eigen::MatrixXd hs = Eigen::MatrixXd::Zero(n, h);
  Eigen::MatrixXd cs = Eigen::MatrixXd::Zero(n, h);
  Eigen::MatrixXd x, z;
  if (tape) tape->steps.resize(static_cast<std::size_t>(steps));

  for (Eigen::Index t = 0; t < steps; ++t) {
    step_input(batch, t, x);
    z.noalias() = x * params_.wx.transpose();
    z.noalias() += hs * params_.wh.transpose();
    z.rowwise() += params_.b.transpose();

    const Eigen::ArrayXXd ig = sigmoid(z.leftCols(h).array());
    const Eigen::ArrayXXd fg = sigmoid(z.middleCols(h, h).array());
    const Eigen::ArrayXXd gg = z.middleCols(2 * h, h).array().tanh();
    const Eigen::ArrayXXd og = sigmoid(z.rightCols(h).array());
    const Eigen::ArrayXXd c_new = fg * cs.array() + ig * gg;
    const Eigen::ArrayXXd tanh_c = c_new.tanh();
    const Eigen::ArrayXXd h_new = og * tanh_c;

    if (tape) {
      auto& st = tape->steps[static_cast<std::size_t>(t)];
      st.x = x;
      st.h_prev = hs;
      st.c_prev = cs;
      st.i = ig.matrix();
      st.f = fg.matrix();
      st.g = gg.matrix();
      st.o = og.matrix();
      st.tanh_c = tanh_c.matrix();
      st.active.resize(static_cast<std::size_t>(n));
      for (Eigen::Index b = 0; b < n; ++b)
        st.active[static_cast<std::size_t>(b)] = t < batch[static_cast<std::size_t>(b)].length();
    }
    for (Eigen::Index b = 0; b < n; ++b) {
      if (t >= batch[static_cast<std::size_t>(b)].length()) continue;  // padded step
      cs.row(b) = c_new.row(b).matrix();
      hs.row(b) = h_new.row(b).matrix();
    }
  }
  if (tape) tape->h_final = hs;
  Eigen::MatrixXd logits = hs * params_.wy.transpose();
  logits.rowwise() += params_.by.transpose();
  return logits;
}

double LstmModel::loss(const std::vector<SequenceInput>& batch, const std::vector<int>& labels,
                       LstmParams* grads) const {
  validate(batch);
  if (labels.size() != batch.size()) throw InvalidArgument("LSTM: label count differs from batch");
  for (int y : labels)
    if (y < 0 || y >= classes_) throw InvalidArgument(fmt::format("LSTM: label {} out of range", y));

  Tape tape;
  const Eigen::MatrixXd logits = forward(batch, grads ? &tape : nullptr);
  const auto n = static_cast<Eigen::Index>(batch.size());
  const double inv_n = 1.0 / static_cast<double>(n);

  double total = 0.0;
  for (Eigen::Index b = 0; b < n; ++b) {
    const double m = logits.row(b).maxCoeff();
    const double lse = m + std::log((logits.row(b).array() - m).exp().sum());
    total += lse - logits(b, labels[static_cast<std::size_t>(b)]);
  }
  if (!grads) return total * inv_n;

  const Eigen::Index h = hidden_;
  grads->set_zero_like(params_);

  Eigen::MatrixXd dlogits = softmax_rows(logits);
  for (Eigen::Index b = 0; b < n; ++b) dlogits(b, labels[static_cast<std::size_t>(b)]) -= 1.0;
  dlogits *= inv_n;
  grads->wy.noalias() = dlogits.transpose() * tape.h_final;
  grads->by = dlogits.colwise().sum().transpose();

  Eigen::MatrixXd dh = dlogits * params_.wy;
  Eigen::MatrixXd dc = Eigen::MatrixXd::Zero(n, h);
  Eigen::MatrixXd dz(n, 4 * h);
  Eigen::MatrixXd dh_prev, dc_prev, dx;

  for (auto t = static_cast<Eigen::Index>(tape.steps.size()) - 1; t >= 0; --t) {
    const auto& st = tape.steps[static_cast<std::size_t>(t)];
    Eigen::ArrayXXd dh_new = dh.array();
    Eigen::ArrayXXd dc_carry = dc.array();
    for (Eigen::Index b = 0; b < n; ++b) {
      if (st.active[static_cast<std::size_t>(b)]) continue;
      dh_new.row(b).setZero();
      dc_carry.row(b).setZero();
    }
    const Eigen::ArrayXXd tanh_c = st.tanh_c.array();
    const Eigen::ArrayXXd o = st.o.array();
    const Eigen::ArrayXXd dc_new = dc_carry + dh_new * o * (1.0 - tanh_c.square());

    const Eigen::ArrayXXd i = st.i.array();
    const Eigen::ArrayXXd f = st.f.array();
    const Eigen::ArrayXXd g = st.g.array();
    dz.leftCols(h) = (dc_new * g * i * (1.0 - i)).matrix();
    dz.middleCols(h, h) = (dc_new * st.c_prev.array() * f * (1.0 - f)).matrix();
    dz.middleCols(2 * h, h) = (dc_new * i * (1.0 - g.square())).matrix();
    dz.rightCols(h) = (dh_new * tanh_c * o * (1.0 - o)).matrix();

    grads->wx.noalias() += dz.transpose() * st.x;
    grads->wh.noalias() += dz.transpose() * st.h_prev;
    grads->b += dz.colwise().sum().transpose();

    if (mode_ == LstmInputMode::kEmbedded) {
      dx.noalias() = dz * params_.wx;
      for (Eigen::Index b = 0; b < n; ++b) {
        if (!st.active[static_cast<std::size_t>(b)]) continue;
        const int sym = (*batch[static_cast<std::size_t>(b)].symbols)[static_cast<std::size_t>(t)];
        grads->embedding.row(sym) += dx.row(b);
      }
    }

    dh_prev.noalias() = dz * params_.wh;
    dc_prev = (dc_new * f).matrix();
    for (Eigen::Index b = 0; b < n; ++b) {
      if (st.active[static_cast<std::size_t>(b)]) continue;
      // Padded step: state passed through unchanged.
      dh_prev.row(b) = dh.row(b);
      dc_prev.row(b) = dc.row(b);
    }
    dh.swap(dh_prev);
    dc.swap(dc_prev);
  }
  return total * inv_n;
}

Eigen::MatrixXd LstmModel::predict_proba(const std::vector<SequenceInput>& inputs) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(inputs.size()), classes_);
  constexpr std::size_t kChunk = 256;
  for (std::size_t begin = 0; begin < inputs.size(); begin += kChunk) {
    const std::size_t end = std::min(inputs.size(), begin + kChunk);
    const std::vector<SequenceInput> chunk(inputs.begin() + static_cast<std::ptrdiff_t>(begin),
                                           inputs.begin() + static_cast<std::ptrdiff_t>(end));
    validate(chunk);
    out.middleRows(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(end - begin)) =
        softmax_rows(forward(chunk, nullptr));
  }
  return out;
}

std::vector<int> LstmModel::predict(const std::vector<SequenceInput>& inputs) const {
  const Eigen::MatrixXd p = predict_proba(inputs);
  std::vector<int> out(inputs.size());
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    Eigen::Index best = 0;
    p.row(r).maxCoeff(&best);
    out[static_cast<std::size_t>(r)] = static_cast<int>(best);
  }
  return out;
}

LstmTrainResult train_lstm(const std::vector<SequenceInput>& inputs,
                           const std::vector<int>& labels, int num_classes,
                           LstmInputMode mode, int vocabulary_or_dim,
                           const TrainConfig& config) {
  config.validate();
  if (inputs.empty()) throw InvalidArgument("LSTM: empty training split");
  if (labels.size() != inputs.size()) throw InvalidArgument("LSTM: label count differs from inputs");

  LstmTrainResult result{LstmModel(mode, vocabulary_or_dim, config.hidden_size, config.embed_dim,
                                   num_classes, config.seed),
                         {}};
  LstmModel& model = result.model;
  LstmParams grads;
  std::vector<std::size_t> order(inputs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<SequenceInput> batch;
  std::vector<int> batch_labels;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::mt19937_64 rng(derive_seed(config.seed, 0xe90cULL, static_cast<std::uint64_t>(epoch)));
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t begin = 0; begin < order.size();
         begin += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(order.size(), begin + static_cast<std::size_t>(config.batch_size));
      batch.clear();
      batch_labels.clear();
      for (std::size_t k = begin; k < end; ++k) {
        batch.push_back(inputs[order[k]]);
        batch_labels.push_back(labels[order[k]]);
      }
      epoch_loss += model.loss(batch, batch_labels, &grads);
      ++batches;

      const double norm = std::sqrt(grads.squared_norm());
      const double scale = norm > config.clip_norm ? config.clip_norm / norm : 1.0;
      auto params = model.params().views();
      auto deltas = grads.views();
      for (std::size_t v = 0; v < params.size(); ++v)
        for (Eigen::Index j = 0; j < params[v].size; ++j)
          params[v].data[j] -= config.learning_rate * scale * deltas[v].data[j];
    }
    result.epoch_loss.push_back(epoch_loss / static_cast<double>(batches));
  }
  return result;
}

}  // namespace tonequant

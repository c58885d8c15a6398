// Copyright 2026 The volkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "volkit/training.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "volkit/errors.hpp"

namespace volkit {

std::vector<LayerSpec> ModelSpec::layer_specs() const {
  std::vector<LayerSpec> specs;
  std::size_t in = input_dim;
  for (std::size_t h : hidden) {
    specs.push_back({in, h, activation, bias});
    in = h;
  }
  specs.push_back({in, output_dim, Activation::identity, bias});
  return specs;
}

void TrainConfig::validate() const {
  optimizer.validate();
  volumization.validate();
  if (model.input_dim == 0 || model.output_dim == 0) throw ConfigError("model dimensions must be >= 1");
  for (std::size_t h : model.hidden)
    if (h == 0) throw ConfigError("hidden widths must be >= 1");
  if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
  if (quantization && quantization->period_epochs == 0) throw ConfigError("quantization period must be >= 1");
}

namespace {

struct Split {
  double loss;
  double acc;
};

Split loss_and_accuracy(const Network& net, const DenseMatrix& x, const DenseMatrix& targets,
                        const std::vector<int>& labels, Loss loss) {
  const DenseMatrix out = forward(net, x);
  std::size_t correct = 0;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    const auto row = out.row(r);
    if (std::max_element(row.begin(), row.end()) - row.begin() == labels[r]) ++correct;
  }
  // Recomputing the loss through loss_value would repeat the forward pass.
  double total = 0.0;
  if (loss == Loss::mse) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double d = out.data()[i] - targets.data()[i];
      total += d * d;
    }
    total /= 2.0;
  } else {
    for (std::size_t r = 0; r < out.rows(); ++r) {
      const auto row = out.row(r);
      const double mx = *std::max_element(row.begin(), row.end());
      double s = 0.0;
      for (double v : row) s += std::exp(v - mx);
      total -= row[static_cast<std::size_t>(labels[r])] - mx - std::log(s);
    }
  }
  const double n = static_cast<double>(out.rows());
  return {total / n, static_cast<double>(correct) / n};
}

void check_data(const TrainConfig& cfg, const Dataset& data) {
  if (data.x_train.cols() != cfg.model.input_dim || data.x_test.cols() != cfg.model.input_dim) {
    throw ConfigError("dataset dimension does not match model input_dim");
  }
  if (data.n_classes != cfg.model.output_dim) throw ConfigError("dataset classes do not match model output_dim");
}

}  // namespace

TrainerState initial_state(TrainConfig config, std::uint64_t seed) {
  config.validate();
  SeededRng init = SeededRng(seed).derive(0);
  const auto specs = config.model.layer_specs();
  Network net = Network::he_uniform(specs, init, config.volumization.fan_mode);
  OptimizerState opt = OptimizerState::zeros_like(net);
  return TrainerState{std::move(config), std::move(net), std::move(opt), 0, SeededRng(seed).derive(1), {}};
}

Trainer::Trainer(TrainConfig config, const Dataset& data, std::uint64_t seed)
    : Trainer(initial_state(std::move(config), seed), data) {}

Trainer::Trainer(TrainerState state, const Dataset& data)
    : state_(std::move(state)),
      data_(&data),
      train_targets_(one_hot(data.y_train, data.n_classes)),
      test_targets_(one_hot(data.y_test, data.n_classes)) {
  state_.config.validate();
  check_data(state_.config, data);
  if (state_.network.tensor_count() != state_.optimizer.m.size()) {
    throw ConfigError("restored optimizer state does not match the network");
  }
  volumes_ = derive_layer_volumes(state_.network, state_.config.volumization);
}

EpochMetrics Trainer::evaluate(const Network& net) const {
  const Loss loss = state_.config.model.loss;
  const Split tr = loss_and_accuracy(net, data_->x_train, train_targets_, data_->y_train, loss);
  const Split te = loss_and_accuracy(net, data_->x_test, test_targets_, data_->y_test, loss);
  return {tr.loss, tr.acc, te.loss, te.acc};
}

void Trainer::run_epoch() {
  const TrainConfig& cfg = state_.config;
  const std::size_t n = data_->x_train.rows();
  const std::size_t dim = data_->x_train.cols();
  const std::size_t classes = data_->n_classes;
  // Every `period` completed epochs the network snaps to the walls and
  // training continues from the quantized weights.
  if (cfg.quantization && state_.epoch > 0 && state_.epoch % cfg.quantization->period_epochs == 0) {
    quantize_network(state_.network, volumes_, cfg.quantization->mode);
  }
  const auto order = random_permutation(state_.rng, n);

  for (std::size_t start = 0; start < n; start += cfg.batch_size) {
    const std::size_t m = std::min(cfg.batch_size, n - start);
    DenseMatrix xb(m, dim);
    DenseMatrix tb(m, classes);
    for (std::size_t r = 0; r < m; ++r) {
      const std::size_t src = order[start + r];
      std::copy(data_->x_train.row(src).begin(), data_->x_train.row(src).end(), xb.row(r).begin());
      std::copy(train_targets_.row(src).begin(), train_targets_.row(src).end(), tb.row(r).begin());
    }
    const GradientBundle g = loss_and_grad(state_.network, xb, tb, cfg.model.loss);
    step(state_.network, g, state_.optimizer, cfg.optimizer, volumes_, cfg.volumization.alpha,
         cfg.volumization.overshoot);
  }

  state_.epoch += 1;
  state_.trajectory.push(evaluate(state_.network));
}

void Trainer::run() {
  while (!done()) run_epoch();
}

}  // namespace volkit

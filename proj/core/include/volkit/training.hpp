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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "volkit/data.hpp"
#include "volkit/metrics.hpp"
#include "volkit/net.hpp"
#include "volkit/optimizers.hpp"
#include "volkit/quantizer.hpp"
#include "volkit/rng.hpp"
#include "volkit/volumization.hpp"

namespace volkit {

/// Multi-layer perceptron: hidden layers use `activation`, the output layer
/// is linear.
struct ModelSpec {
  std::size_t input_dim = 2;
  std::vector<std::size_t> hidden = {64};
  std::size_t output_dim = 2;
  Activation activation = Activation::relu;
  Loss loss = Loss::softmax_xent;
  bool bias = true;

  std::vector<LayerSpec> layer_specs() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

struct TrainConfig {
  ModelSpec model;
  OptimizerSpec optimizer;
  VolumizationConfig volumization;
  std::size_t epochs = 100;
  std::size_t batch_size = 128;
  std::optional<QuantizationScheme> quantization;

  /// Throws ConfigError / DomainError on an invalid combination.
  void validate() const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// Everything needed to continue a run exactly where it stopped.
struct TrainerState {
  TrainConfig config;
  Network network;
  OptimizerState optimizer;
  std::size_t epoch = 0;
  SeededRng rng;
  MetricTrajectory trajectory;

  friend bool operator==(const TrainerState&, const TrainerState&) = default;
};

/// Fresh state: network initialized from seed-derived stream 0, batch order
/// drawn from stream 1.
TrainerState initial_state(TrainConfig config, std::uint64_t seed);

/// Mini-batch trainer over a fixed labeled dataset. The batch-order stream
/// position is part of the state, so a restored run replays the remaining
/// epochs bit for bit.
class Trainer {
 public:
  Trainer(TrainConfig config, const Dataset& data, std::uint64_t seed);
  Trainer(TrainerState state, const Dataset& data);

  /// Runs one epoch (optional quantization event, shuffle, mini-batch
  /// volumized steps, evaluation) and records its metrics.
  void run_epoch();
  /// Runs until `epoch()` reaches config.epochs.
  void run();

  std::size_t epoch() const noexcept { return state_.epoch; }
  bool done() const noexcept { return state_.epoch >= state_.config.epochs; }
  const Network& network() const noexcept { return state_.network; }
  const TrainConfig& config() const noexcept { return state_.config; }
  const MetricTrajectory& trajectory() const noexcept { return state_.trajectory; }
  const std::vector<LayerVolume>& volumes() const noexcept { return volumes_; }
  const TrainerState& state() const noexcept { return state_; }

  EpochMetrics evaluate(const Network& net) const;

 private:
  TrainerState state_;
  const Dataset* data_;
  std::vector<LayerVolume> volumes_;
  DenseMatrix train_targets_;
  DenseMatrix test_targets_;
};

}  // namespace volkit

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

#include <cstdint>

#include "volkit/data.hpp"
#include "volkit/metrics.hpp"
#include "volkit/net.hpp"
#include "volkit/quantizer.hpp"
#include "volkit/training.hpp"

namespace volkit {

struct QuantizedTrainingResult {
  MetricTrajectory trajectory;
  Network float_network;      // weights at the end of training
  Network quantized_network;  // final weights quantized to the walls
  std::vector<LayerVolume> volumes;
  double float_test_acc = 0.0;
  double quantized_test_acc = 0.0;
};

/// Volumized training that quantizes all tensors in place every
/// scheme.period_epochs epochs and keeps training from the quantized
/// weights; optimizer state carries over unchanged. The volumization must
/// give finite positive volumes (quantization targets its walls).
QuantizedTrainingResult quantized_training(TrainConfig config, const Dataset& data,
                                           std::uint64_t seed, const QuantizationScheme& scheme);

}  // namespace volkit

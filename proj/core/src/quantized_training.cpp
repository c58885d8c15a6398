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

#include "volkit/quantized_training.hpp"

#include "volkit/errors.hpp"

namespace volkit {

QuantizedTrainingResult quantized_training(TrainConfig config, const Dataset& data, std::uint64_t seed,
                                           const QuantizationScheme& scheme) {
  if (config.volumization.is_identity() || !(config.volumization.v > 0.0)) {
    throw ConfigError("quantized training needs an active volumization with v > 0");
  }
  config.quantization = scheme;
  Trainer trainer(config, data, seed);
  trainer.run();

  QuantizedTrainingResult out{trainer.trajectory(), trainer.network(), trainer.network(),
                              trainer.volumes(), 0.0, 0.0};
  quantize_network(out.quantized_network, out.volumes, scheme.mode);
  out.float_test_acc = trainer.evaluate(out.float_network).test_acc;
  out.quantized_test_acc = trainer.evaluate(out.quantized_network).test_acc;
  return out;
}

}  // namespace volkit

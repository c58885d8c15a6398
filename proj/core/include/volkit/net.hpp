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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "volkit/linalg.hpp"
#include "volkit/rng.hpp"

namespace volkit {

/// All members are 1-Lipschitz.
enum class Activation { identity, relu, tanh };
enum class FanMode { fan_in, fan_out };
enum class Loss { mse, softmax_xent };

std::string_view to_string(Activation a) noexcept;
std::string_view to_string(FanMode f) noexcept;
std::string_view to_string(Loss l) noexcept;
Activation parse_activation(std::string_view s);
FanMode parse_fan_mode(std::string_view s);
Loss parse_loss(std::string_view s);

struct LayerSpec {
  std::size_t in_dim = 1;
  std::size_t out_dim = 1;
  Activation activation = Activation::identity;
  bool has_bias = true;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// Recorded He-uniform scale a = sqrt(6 / fan) together with the fan
/// convention that produced it.
struct InitScale {
  double a = 0.0;
  FanMode fan_mode = FanMode::fan_in;

  friend bool operator==(const InitScale&, const InitScale&) = default;
};

/// Dense layer y = act(x W^T + b). W is out_dim x in_dim.
struct Layer {
  LayerSpec spec;
  DenseMatrix weight;
  std::vector<double> bias;           // empty when !spec.has_bias
  std::optional<InitScale> init_scale;  // absent for hand-built layers

  friend bool operator==(const Layer&, const Layer&) = default;
};

/// Borrowed view of one trainable tensor.
struct ParamRef {
  std::size_t layer;
  bool is_bias;
  std::span<double> values;
};

class Network {
 public:
  /// Validates that adjacent layer dimensions chain.
  explicit Network(std::vector<Layer> layers);

  /// He-uniform initialization: weights ~ Unif(-a, a) with a = sqrt(6 / fan),
  /// fan taken from `fan_mode`; biases start at zero.
  static Network he_uniform(std::span<const LayerSpec> specs, SeededRng& rng,
                            FanMode fan_mode = FanMode::fan_in);

  const std::vector<Layer>& layers() const noexcept { return layers_; }
  std::size_t depth() const noexcept { return layers_.size(); }
  std::size_t input_dim() const noexcept { return layers_.front().spec.in_dim; }
  std::size_t output_dim() const noexcept { return layers_.back().spec.out_dim; }

  /// Weight and (if present) bias of every layer, in layer order.
  std::vector<ParamRef> parameters();
  std::vector<std::span<const double>> parameters() const;
  std::vector<std::string> parameter_names() const;
  std::size_t tensor_count() const noexcept;
  std::size_t parameter_count() const noexcept;

  /// Mutable access for explicit parameter updates.
  Layer& layer(std::size_t i) { return layers_.at(i); }

  friend bool operator==(const Network&, const Network&) = default;

 private:
  std::vector<Layer> layers_;
};

/// Gradients mirroring Network::parameters(), plus the loss value.
struct GradientBundle {
  double loss = 0.0;
  std::vector<std::vector<double>> grads;
};

/// Per-layer intermediate values of a forward pass.
struct ForwardTrace {
  std::vector<DenseMatrix> inputs;          // input to each layer
  std::vector<DenseMatrix> pre_activations; // x W^T + b
  DenseMatrix output;
};

DenseMatrix forward(const Network& net, const DenseMatrix& x);
ForwardTrace forward_trace(const Network& net, const DenseMatrix& x);

/// mse: 1/(2N) sum_i ||f(x_i) - y_i||^2.
/// softmax_xent: mean over the batch of -log softmax(f(x_i))[y_i]; target
/// is one-hot (N x classes).
double loss_value(const Network& net, const DenseMatrix& x, const DenseMatrix& target, Loss loss);

/// Loss and its exact gradient by reverse-mode differentiation.
/// Throws NumericError if an activation or the loss is not finite.
GradientBundle loss_and_grad(const Network& net, const DenseMatrix& x, const DenseMatrix& target,
                             Loss loss);

/// One-hot encode class indices into an N x n_classes matrix.
DenseMatrix one_hot(std::span<const int> labels, std::size_t n_classes);

/// Fraction of rows whose argmax output equals the label.
double accuracy(const Network& net, const DenseMatrix& x, std::span<const int> labels);

/// Lower bound on the Lipschitz constant: max over sampled pairs
/// (x, x + delta), x ~ Unif(-1, 1)^d, 0 < ||delta|| <= radius, of
/// ||f(x + delta) - f(x)|| / ||delta||.
double empirical_lipschitz(const Network& net, SeededRng& rng, std::size_t n_pairs, double radius);

}  // namespace volkit

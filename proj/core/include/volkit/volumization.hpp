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
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "volkit/net.hpp"

namespace volkit {

/// What to do with a parameter that is still outside [-V, V] after the
/// volumization update (possible only for alpha < 0).
enum class OvershootPolicy { leave, clamp };

std::string_view to_string(OvershootPolicy p) noexcept;
OvershootPolicy parse_overshoot_policy(std::string_view s);

/// Volume ratio v and softening alpha. The per-layer volume is
/// V = v * a with a the layer's He-uniform scale sqrt(6 / fan).
///
/// alpha = 1 disables the transform, alpha = 0 is weight clipping, alpha = -1
/// reflects parameters elastically off the walls, and v = 0 with
/// 0 < alpha < 1 is weight decay with coefficient 1 - alpha (momentum decays
/// as well).
struct VolumizationConfig {
  double v = std::numeric_limits<double>::infinity();
  double alpha = 1.0;
  FanMode fan_mode = FanMode::fan_in;
  OvershootPolicy overshoot = OvershootPolicy::leave;

  /// v = inf, alpha = 1: no regularization.
  static VolumizationConfig none() { return {}; }

  /// Throws DomainError unless v >= 0 and -1 <= alpha <= 1.
  void validate() const;
  bool is_identity() const noexcept { return alpha == 1.0 || v == std::numeric_limits<double>::infinity(); }

  friend bool operator==(const VolumizationConfig&, const VolumizationConfig&) = default;
};

/// Volume of one parameter tensor. Weight and bias of a layer share it.
struct LayerVolume {
  std::size_t layer = 0;
  bool is_bias = false;
  double volume = std::numeric_limits<double>::infinity();

  friend bool operator==(const LayerVolume&, const LayerVolume&) = default;
};

/// Applies the volumization transform in place. For every index with
/// |w_i| > V:
///   w_i <- alpha * w_i + (1 - alpha) * V * sgn(w_i)
///   m_i <- alpha * m_i
/// Other indices are untouched. With OvershootPolicy::clamp a result still
/// outside [-V, V] is clamped to +-V; m is not touched again.
/// `momentum` may be empty (no momentum buffer). Returns the number of
/// indices that crossed the wall.
std::size_t volumize_inplace(std::span<double> weights, std::span<double> momentum, double volume,
                             double alpha, OvershootPolicy policy = OvershootPolicy::leave);

struct VolumizedPair {
  std::vector<double> weights;
  std::vector<double> momentum;
};

/// Value-returning form of volumize_inplace.
VolumizedPair volumize_step(std::span<const double> w_hat, std::span<const double> m_hat,
                            double volume, double alpha,
                            OvershootPolicy policy = OvershootPolicy::leave);

/// One LayerVolume per parameter tensor, V = cfg.v * a. v = inf gives
/// V = inf for every layer (and does not need an init scale).
/// Throws ConfigError if a layer has no recorded init scale or the scale was
/// recorded under a different fan convention than cfg.fan_mode.
std::vector<LayerVolume> derive_layer_volumes(const Network& net, const VolumizationConfig& cfg);

/// The same volume for every tensor.
std::vector<LayerVolume> uniform_volumes(const Network& net, double volume);

/// V_i = 1 / max(rows_i, cols_i) per layer: the 1-Lipschitz configuration.
std::vector<LayerVolume> lipschitz_volumes(const Network& net);

}  // namespace volkit

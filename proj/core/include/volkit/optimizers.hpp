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
#include <span>
#include <string_view>
#include <vector>

#include "volkit/net.hpp"
#include "volkit/volumization.hpp"

namespace volkit {

enum class OptimizerKind { sgd, adam, laprop };

std::string_view to_string(OptimizerKind k) noexcept;
OptimizerKind parse_optimizer_kind(std::string_view s);

/// Hyperparameters. mu is the SGD momentum or the first-moment decay of
/// Adam/LaProp; nu is the second-moment decay (unused by SGD).
struct OptimizerSpec {
  OptimizerKind kind = OptimizerKind::adam;
  double lr = 1e-4;
  double mu = 0.9;
  double nu = 0.999;
  double eps = 1e-8;
  bool bias_correction = true;

  /// Throws DomainError on lr <= 0, mu/nu outside [0, 1) or eps <= 0.
  void validate() const;

  friend bool operator==(const OptimizerSpec&, const OptimizerSpec&) = default;
};

/// Moment buffers mirroring Network::parameters(); t counts completed steps.
struct OptimizerState {
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> n;
  std::uint64_t t = 0;

  /// Zero buffers shaped like `net`.
  static OptimizerState zeros_like(const Network& net);

  friend bool operator==(const OptimizerState&, const OptimizerState&) = default;
};

/// Raw optimizer update of one tensor at step t (t >= 1), without
/// volumization:
///   sgd:    m = mu m + g;                      w -= lr m
///   adam:   n = nu n + (1-nu) g^2; m = mu m + (1-mu) g
///           w -= lr (m / c_m) / (sqrt(n / c_n) + eps)
///   laprop: n = nu n + (1-nu) g^2; m = mu m + (1-mu) g / (sqrt(n / c_n) + eps)
///           w -= lr m / c_m
/// with c_m = 1 - mu^t, c_n = 1 - nu^t (both 1 when bias correction is off).
/// `n` is ignored for sgd and may be empty.
void optimizer_update(std::span<double> w, std::span<double> m, std::span<double> n,
                      std::span<const double> g, const OptimizerSpec& spec, std::uint64_t t);

/// One volumized optimizer step: increments state.t, applies the raw update
/// to every tensor, then volumizes every tensor with its volume and alpha,
/// decaying the stored first moment of crossed elements.
/// Throws ShapeError if buffers or volumes do not mirror the network and
/// NumericError (naming the tensor) on a non-finite gradient.
void step(Network& net, const GradientBundle& grads, OptimizerState& state, const OptimizerSpec& spec,
          std::span<const LayerVolume> volumes, double alpha,
          OvershootPolicy policy = OvershootPolicy::leave);

}  // namespace volkit

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

#include "volkit/volumization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "volkit/errors.hpp"

namespace volkit {

std::string_view to_string(OvershootPolicy p) noexcept {
  return p == OvershootPolicy::leave ? "leave" : "clamp";
}

OvershootPolicy parse_overshoot_policy(std::string_view s) {
  if (s == "leave") return OvershootPolicy::leave;
  if (s == "clamp") return OvershootPolicy::clamp;
  throw ConfigError("unknown overshoot policy '" + std::string(s) + "'");
}

void VolumizationConfig::validate() const {
  if (!(v >= 0.0)) throw DomainError("volumization: v must be >= 0");
  if (!(alpha >= -1.0 && alpha <= 1.0)) throw DomainError("volumization: alpha must lie in [-1, 1]");
}

std::size_t volumize_inplace(std::span<double> weights, std::span<double> momentum, double volume,
                             double alpha, OvershootPolicy policy) {
  if (!(volume >= 0.0)) throw DomainError("volumize: V must be >= 0");
  if (!(alpha >= -1.0 && alpha <= 1.0)) throw DomainError("volumize: alpha must lie in [-1, 1]");
  if (!momentum.empty() && momentum.size() != weights.size()) {
    throw ShapeError("volumize: weight and momentum lengths differ");
  }
  if (alpha == 1.0) return 0;

  const double pull = 1.0 - alpha;
  std::size_t crossed = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!(std::abs(w) > volume)) continue;
    ++crossed;
    const double wall = std::copysign(volume, w);
    double out = alpha * w + pull * wall;
    if (policy == OvershootPolicy::clamp) out = std::clamp(out, -volume, volume);
    weights[i] = out;
    if (!momentum.empty()) momentum[i] *= alpha;
  }
  return crossed;
}

VolumizedPair volumize_step(std::span<const double> w_hat, std::span<const double> m_hat,
                            double volume, double alpha, OvershootPolicy policy) {
  if (w_hat.size() != m_hat.size()) throw ShapeError("volumize_step: w and m lengths differ");
  VolumizedPair out{{w_hat.begin(), w_hat.end()}, {m_hat.begin(), m_hat.end()}};
  volumize_inplace(out.weights, out.momentum, volume, alpha, policy);
  return out;
}

std::vector<LayerVolume> derive_layer_volumes(const Network& net, const VolumizationConfig& cfg) {
  cfg.validate();
  std::vector<LayerVolume> out;
  const bool unbounded = std::isinf(cfg.v);
  for (std::size_t i = 0; i < net.depth(); ++i) {
    const Layer& l = net.layers()[i];
    double volume = cfg.v;
    if (!unbounded) {
      if (!l.init_scale) {
        throw ConfigError("layer " + std::to_string(i) + " has no recorded init scale");
      }
      if (l.init_scale->fan_mode != cfg.fan_mode) {
        throw ConfigError("layer " + std::to_string(i) + " was initialized with " +
                          std::string(to_string(l.init_scale->fan_mode)) + " but volumization uses " +
                          std::string(to_string(cfg.fan_mode)));
      }
      volume = cfg.v * l.init_scale->a;
    }
    out.push_back({i, false, volume});
    if (l.spec.has_bias) out.push_back({i, true, volume});
  }
  return out;
}

std::vector<LayerVolume> uniform_volumes(const Network& net, double volume) {
  std::vector<LayerVolume> out;
  for (std::size_t i = 0; i < net.depth(); ++i) {
    out.push_back({i, false, volume});
    if (net.layers()[i].spec.has_bias) out.push_back({i, true, volume});
  }
  return out;
}

std::vector<LayerVolume> lipschitz_volumes(const Network& net) {
  std::vector<LayerVolume> out;
  for (std::size_t i = 0; i < net.depth(); ++i) {
    const auto& w = net.layers()[i].weight;
    const double volume = 1.0 / static_cast<double>(std::max(w.rows(), w.cols()));
    out.push_back({i, false, volume});
    if (net.layers()[i].spec.has_bias) out.push_back({i, true, volume});
  }
  return out;
}

}  // namespace volkit

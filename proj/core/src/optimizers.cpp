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

#include "volkit/optimizers.hpp"

#include <cmath>
#include <string>

#include "volkit/errors.hpp"

namespace volkit {

std::string_view to_string(OptimizerKind k) noexcept {
  switch (k) {
    case OptimizerKind::sgd: return "sgd";
    case OptimizerKind::adam: return "adam";
    case OptimizerKind::laprop: return "laprop";
  }
  return "?";
}

OptimizerKind parse_optimizer_kind(std::string_view s) {
  if (s == "sgd") return OptimizerKind::sgd;
  if (s == "adam") return OptimizerKind::adam;
  if (s == "laprop") return OptimizerKind::laprop;
  throw ConfigError("unknown optimizer '" + std::string(s) + "'");
}

void OptimizerSpec::validate() const {
  if (!(lr > 0.0)) throw DomainError("optimizer: lr must be positive");
  if (!(mu >= 0.0 && mu < 1.0)) throw DomainError("optimizer: mu must lie in [0, 1)");
  if (!(nu >= 0.0 && nu < 1.0)) throw DomainError("optimizer: nu must lie in [0, 1)");
  if (!(eps > 0.0)) throw DomainError("optimizer: eps must be positive");
}

OptimizerState OptimizerState::zeros_like(const Network& net) {
  OptimizerState s;
  for (auto p : net.parameters()) {
    s.m.emplace_back(p.size(), 0.0);
    s.n.emplace_back(p.size(), 0.0);
  }
  return s;
}

void optimizer_update(std::span<double> w, std::span<double> m, std::span<double> n,
                      std::span<const double> g, const OptimizerSpec& spec, std::uint64_t t) {
  if (m.size() != w.size() || g.size() != w.size() ||
      (spec.kind != OptimizerKind::sgd && n.size() != w.size())) {
    throw ShapeError("optimizer_update: buffer lengths differ");
  }
  const double lr = spec.lr;
  const double mu = spec.mu;
  const double nu = spec.nu;
  const double td = static_cast<double>(t);
  const double c_m = spec.bias_correction ? 1.0 - std::pow(mu, td) : 1.0;
  const double c_n = spec.bias_correction ? 1.0 - std::pow(nu, td) : 1.0;

  switch (spec.kind) {
    case OptimizerKind::sgd:
      for (std::size_t i = 0; i < w.size(); ++i) {
        m[i] = mu * m[i] + g[i];
        w[i] = w[i] - lr * m[i];
      }
      break;
    case OptimizerKind::adam:
      for (std::size_t i = 0; i < w.size(); ++i) {
        n[i] = nu * n[i] + (1.0 - nu) * g[i] * g[i];
        m[i] = mu * m[i] + (1.0 - mu) * g[i];
        w[i] = w[i] - lr * (m[i] / c_m) / (std::sqrt(n[i] / c_n) + spec.eps);
      }
      break;
    case OptimizerKind::laprop:
      for (std::size_t i = 0; i < w.size(); ++i) {
        n[i] = nu * n[i] + (1.0 - nu) * g[i] * g[i];
        m[i] = mu * m[i] + (1.0 - mu) * g[i] / (std::sqrt(n[i] / c_n) + spec.eps);
        w[i] = w[i] - lr * m[i] / c_m;
      }
      break;
  }
}

void step(Network& net, const GradientBundle& grads, OptimizerState& state, const OptimizerSpec& spec,
          std::span<const LayerVolume> volumes, double alpha, OvershootPolicy policy) {
  auto params = net.parameters();
  const std::size_t k = params.size();
  if (grads.grads.size() != k || state.m.size() != k || state.n.size() != k || volumes.size() != k) {
    throw ShapeError("optimizer step: gradients, state or volumes do not mirror the network");
  }
  const auto names = net.parameter_names();
  for (std::size_t i = 0; i < k; ++i) {
    if (grads.grads[i].size() != params[i].values.size() ||
        state.m[i].size() != params[i].values.size() ||
        state.n[i].size() != params[i].values.size()) {
      throw ShapeError("optimizer step: shape mismatch at " + names[i]);
    }
    for (double g : grads.grads[i]) {
      if (!std::isfinite(g)) throw NumericError("non-finite gradient in " + names[i]);
    }
  }

  state.t += 1;
  for (std::size_t i = 0; i < k; ++i) {
    optimizer_update(params[i].values, state.m[i], state.n[i], grads.grads[i], spec, state.t);
  }
  for (std::size_t i = 0; i < k; ++i) {
    volumize_inplace(params[i].values, state.m[i], volumes[i].volume, alpha, policy);
  }
}

}  // namespace volkit

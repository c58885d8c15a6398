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

#include "volkit/net.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "volkit/errors.hpp"

namespace volkit {

std::string_view to_string(Activation a) noexcept {
  switch (a) {
    case Activation::identity: return "identity";
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
  }
  return "?";
}

std::string_view to_string(FanMode f) noexcept {
  return f == FanMode::fan_in ? "fan_in" : "fan_out";
}

std::string_view to_string(Loss l) noexcept { return l == Loss::mse ? "mse" : "softmax_xent"; }

Activation parse_activation(std::string_view s) {
  if (s == "identity") return Activation::identity;
  if (s == "relu") return Activation::relu;
  if (s == "tanh") return Activation::tanh;
  throw ConfigError("unknown activation '" + std::string(s) + "'");
}

FanMode parse_fan_mode(std::string_view s) {
  if (s == "fan_in") return FanMode::fan_in;
  if (s == "fan_out") return FanMode::fan_out;
  throw ConfigError("unknown fan mode '" + std::string(s) + "'");
}

Loss parse_loss(std::string_view s) {
  if (s == "mse") return Loss::mse;
  if (s == "softmax_xent") return Loss::softmax_xent;
  throw ConfigError("unknown loss '" + std::string(s) + "'");
}

Network::Network(std::vector<Layer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw ShapeError("network needs at least one layer");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const Layer& l = layers_[i];
    if (l.spec.in_dim == 0 || l.spec.out_dim == 0) throw ShapeError("layer dimensions must be >= 1");
    if (l.weight.rows() != l.spec.out_dim || l.weight.cols() != l.spec.in_dim) {
      throw ShapeError("layer " + std::to_string(i) + ": weight shape does not match spec");
    }
    if (l.bias.size() != (l.spec.has_bias ? l.spec.out_dim : 0)) {
      throw ShapeError("layer " + std::to_string(i) + ": bias length does not match spec");
    }
    if (i > 0 && layers_[i - 1].spec.out_dim != l.spec.in_dim) {
      throw ShapeError("layer " + std::to_string(i) + ": in_dim does not chain with previous out_dim");
    }
  }
}

Network Network::he_uniform(std::span<const LayerSpec> specs, SeededRng& rng, FanMode fan_mode) {
  std::vector<Layer> layers;
  layers.reserve(specs.size());
  for (const LayerSpec& s : specs) {
    const std::size_t fan = fan_mode == FanMode::fan_in ? s.in_dim : s.out_dim;
    auto init = he_uniform_init(rng, s.out_dim, s.in_dim, fan);
    layers.push_back(Layer{s, std::move(init.weights),
                           std::vector<double>(s.has_bias ? s.out_dim : 0, 0.0),
                           InitScale{init.scale, fan_mode}});
  }
  return Network(std::move(layers));
}

std::vector<ParamRef> Network::parameters() {
  std::vector<ParamRef> out;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    out.push_back({i, false, layers_[i].weight.data()});
    if (layers_[i].spec.has_bias) out.push_back({i, true, layers_[i].bias});
  }
  return out;
}

std::vector<std::span<const double>> Network::parameters() const {
  std::vector<std::span<const double>> out;
  for (const Layer& l : layers_) {
    out.push_back(l.weight.data());
    if (l.spec.has_bias) out.push_back(l.bias);
  }
  return out;
}

std::vector<std::string> Network::parameter_names() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    out.push_back("layer" + std::to_string(i) + ".weight");
    if (layers_[i].spec.has_bias) out.push_back("layer" + std::to_string(i) + ".bias");
  }
  return out;
}

std::size_t Network::tensor_count() const noexcept {
  std::size_t n = 0;
  for (const Layer& l : layers_) n += l.spec.has_bias ? 2 : 1;
  return n;
}

std::size_t Network::parameter_count() const noexcept {
  std::size_t n = 0;
  for (const Layer& l : layers_) n += l.weight.size() + l.bias.size();
  return n;
}

namespace {

double activate(Activation a, double z) {
  switch (a) {
    case Activation::identity: return z;
    case Activation::relu: return z > 0.0 ? z : 0.0;
    case Activation::tanh: return std::tanh(z);
  }
  return z;
}

// Derivative expressed through the pre-activation z and output h = act(z).
double activate_grad(Activation a, double z, double h) {
  switch (a) {
    case Activation::identity: return 1.0;
    case Activation::relu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::tanh: return 1.0 - h * h;
  }
  return 1.0;
}

DenseMatrix affine(const Layer& l, const DenseMatrix& x) {
  DenseMatrix z = matmul_transposed(x, l.weight);
  if (l.spec.has_bias) {
    for (std::size_t r = 0; r < z.rows(); ++r) {
      auto row = z.row(r);
      for (std::size_t c = 0; c < row.size(); ++c) row[c] += l.bias[c];
    }
  }
  return z;
}

void check_input(const Network& net, const DenseMatrix& x) {
  if (x.cols() != net.input_dim()) {
    throw ShapeError("forward: input has " + std::to_string(x.cols()) + " columns, network expects " +
                     std::to_string(net.input_dim()));
  }
}

void check_target(const DenseMatrix& out, const DenseMatrix& target) {
  if (out.rows() != target.rows() || out.cols() != target.cols()) {
    throw ShapeError("loss: target shape does not match network output");
  }
}

// Row-wise log-softmax with max subtraction.
DenseMatrix log_softmax(const DenseMatrix& logits) {
  DenseMatrix out = logits;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    const double mx = *std::max_element(row.begin(), row.end());
    double s = 0.0;
    for (double v : row) s += std::exp(v - mx);
    const double lse = mx + std::log(s);
    for (double& v : row) v -= lse;
  }
  return out;
}

double loss_from_output(const DenseMatrix& out, const DenseMatrix& target, Loss loss) {
  const double n = static_cast<double>(out.rows());
  double total = 0.0;
  if (loss == Loss::mse) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double r = out.data()[i] - target.data()[i];
      total += r * r;
    }
    return total / (2.0 * n);
  }
  const DenseMatrix ls = log_softmax(out);
  for (std::size_t i = 0; i < ls.size(); ++i) total -= target.data()[i] * ls.data()[i];
  return total / n;
}

}  // namespace

ForwardTrace forward_trace(const Network& net, const DenseMatrix& x) {
  check_input(net, x);
  ForwardTrace trace{{}, {}, x};
  DenseMatrix h = x;
  for (const Layer& l : net.layers()) {
    DenseMatrix z = affine(l, h);
    DenseMatrix next = z;
    if (l.spec.activation != Activation::identity)
      for (double& v : next.data()) v = activate(l.spec.activation, v);
    trace.inputs.push_back(std::move(h));
    trace.pre_activations.push_back(std::move(z));
    h = std::move(next);
  }
  trace.output = std::move(h);
  return trace;
}

DenseMatrix forward(const Network& net, const DenseMatrix& x) {
  check_input(net, x);
  DenseMatrix h = affine(net.layers().front(), x);
  for (std::size_t i = 0; i < net.depth(); ++i) {
    const Layer& l = net.layers()[i];
    if (i > 0) h = affine(l, h);
    if (l.spec.activation != Activation::identity)
      for (double& v : h.data()) v = activate(l.spec.activation, v);
  }
  return h;
}

double loss_value(const Network& net, const DenseMatrix& x, const DenseMatrix& target, Loss loss) {
  const DenseMatrix out = forward(net, x);
  check_target(out, target);
  return loss_from_output(out, target, loss);
}

GradientBundle loss_and_grad(const Network& net, const DenseMatrix& x, const DenseMatrix& target,
                             Loss loss) {
  ForwardTrace trace = forward_trace(net, x);
  check_target(trace.output, target);
  if (!trace.output.all_finite()) throw NumericError("loss_and_grad: non-finite network output");

  const double n = static_cast<double>(x.rows());
  GradientBundle bundle;
  bundle.loss = loss_from_output(trace.output, target, loss);
  if (!std::isfinite(bundle.loss)) throw NumericError("loss_and_grad: non-finite loss");

  // dL/d(output)
  DenseMatrix upstream = trace.output;
  if (loss == Loss::mse) {
    for (std::size_t i = 0; i < upstream.size(); ++i)
      upstream.data()[i] = (trace.output.data()[i] - target.data()[i]) / n;
  } else {
    const DenseMatrix ls = log_softmax(trace.output);
    for (std::size_t i = 0; i < upstream.size(); ++i)
      upstream.data()[i] = (std::exp(ls.data()[i]) - target.data()[i]) / n;
  }

  std::vector<std::vector<double>> per_layer_w(net.depth());
  std::vector<std::vector<double>> per_layer_b(net.depth());
  for (std::size_t k = net.depth(); k-- > 0;) {
    const Layer& l = net.layers()[k];
    const DenseMatrix& z = trace.pre_activations[k];
    const DenseMatrix& h_out = k + 1 < net.depth() ? trace.inputs[k + 1] : trace.output;
    DenseMatrix delta = std::move(upstream);
    if (l.spec.activation != Activation::identity) {
      for (std::size_t i = 0; i < delta.size(); ++i)
        delta.data()[i] *= activate_grad(l.spec.activation, z.data()[i], h_out.data()[i]);
    }
    const DenseMatrix dw = transposed_matmul(delta, trace.inputs[k]);
    per_layer_w[k].assign(dw.data().begin(), dw.data().end());
    if (l.spec.has_bias) {
      std::vector<double> db(l.spec.out_dim, 0.0);
      for (std::size_t r = 0; r < delta.rows(); ++r) {
        const auto row = delta.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) db[c] += row[c];
      }
      per_layer_b[k] = std::move(db);
    }
    if (k > 0) upstream = matmul(delta, l.weight);
  }

  for (std::size_t k = 0; k < net.depth(); ++k) {
    bundle.grads.push_back(std::move(per_layer_w[k]));
    if (net.layers()[k].spec.has_bias) bundle.grads.push_back(std::move(per_layer_b[k]));
  }
  return bundle;
}

DenseMatrix one_hot(std::span<const int> labels, std::size_t n_classes) {
  DenseMatrix out(labels.size(), n_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= n_classes) {
      throw DomainError("one_hot: label " + std::to_string(labels[i]) + " out of range");
    }
    out(i, static_cast<std::size_t>(labels[i])) = 1.0;
  }
  return out;
}

double accuracy(const Network& net, const DenseMatrix& x, std::span<const int> labels) {
  if (labels.size() != x.rows()) throw ShapeError("accuracy: label count does not match batch");
  const DenseMatrix out = forward(net, x);
  std::size_t correct = 0;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    const auto row = out.row(r);
    const auto best = std::max_element(row.begin(), row.end()) - row.begin();
    if (best == labels[r]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(out.rows());
}

double empirical_lipschitz(const Network& net, SeededRng& rng, std::size_t n_pairs, double radius) {
  if (n_pairs == 0) throw DomainError("empirical_lipschitz: n_pairs must be >= 1");
  if (!(radius > 0.0)) throw DomainError("empirical_lipschitz: radius must be positive");
  const std::size_t d = net.input_dim();
  constexpr std::size_t kChunk = 1024;
  double best = 0.0;
  for (std::size_t done = 0; done < n_pairs; done += kChunk) {
    const std::size_t m = std::min(kChunk, n_pairs - done);
    DenseMatrix x(m, d);
    DenseMatrix xp(m, d);
    std::vector<double> step_len(m);
    for (std::size_t r = 0; r < m; ++r) {
      auto xr = x.row(r);
      for (double& v : xr) v = -1.0 + 2.0 * rng.next_unit();
      std::vector<double> dir(d);
      for (double& v : dir) v = rng.next_normal();
      const double nd = norm2(dir);
      const double len = radius * rng.next_open_unit();
      auto pr = xp.row(r);
      for (std::size_t c = 0; c < d; ++c) pr[c] = xr[c] + len * dir[c] / nd;
      // Use the realized displacement, not the nominal one.
      double s = 0.0;
      for (std::size_t c = 0; c < d; ++c) s += (pr[c] - xr[c]) * (pr[c] - xr[c]);
      step_len[r] = std::sqrt(s);
    }
    const DenseMatrix fx = forward(net, x);
    const DenseMatrix fxp = forward(net, xp);
    for (std::size_t r = 0; r < m; ++r) {
      if (step_len[r] == 0.0) continue;
      double s = 0.0;
      for (std::size_t c = 0; c < fx.cols(); ++c) {
        const double diff = fxp(r, c) - fx(r, c);
        s += diff * diff;
      }
      best = std::max(best, std::sqrt(s) / step_len[r]);
    }
  }
  return best;
}

}  // namespace volkit

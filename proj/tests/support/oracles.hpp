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

// Independent reference implementations used only by tests. Nothing here
// calls into the code paths it is used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "volkit/linalg.hpp"
#include "volkit/net.hpp"
#include "volkit/optimizers.hpp"

namespace volkit::oracle {

/// Scalar triple loop over raw row-major vectors.
inline std::vector<double> naive_matmul(const std::vector<double>& a, const std::vector<double>& b,
                                        std::size_t n, std::size_t k, std::size_t m) {
  std::vector<double> c(n * m, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < k; ++t) s += a[i * k + t] * b[t * m + j];
      c[i * m + j] = s;
    }
  return c;
}

inline double scalar_activation(Activation act, double z) {
  switch (act) {
    case Activation::identity: return z;
    case Activation::relu: return std::max(z, 0.0);
    case Activation::tanh: return std::tanh(z);
  }
  return z;
}

/// Evaluates a network on one input vector with explicit scalar loops.
inline std::vector<double> scalar_forward(const Network& net, std::vector<double> x) {
  for (const Layer& l : net.layers()) {
    std::vector<double> y(l.spec.out_dim);
    for (std::size_t o = 0; o < l.spec.out_dim; ++o) {
      double s = l.spec.has_bias ? l.bias[o] : 0.0;
      for (std::size_t i = 0; i < l.spec.in_dim; ++i) s += l.weight(o, i) * x[i];
      y[o] = scalar_activation(l.spec.activation, s);
    }
    x = std::move(y);
  }
  return x;
}

/// Loss recomputed from scalar_forward.
inline double scalar_loss(const Network& net, const DenseMatrix& x, const DenseMatrix& target, Loss loss) {
  double total = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto xr = x.row(r);
    const auto out = scalar_forward(net, {xr.begin(), xr.end()});
    if (loss == Loss::mse) {
      for (std::size_t c = 0; c < out.size(); ++c) {
        const double d = out[c] - target(r, c);
        total += 0.5 * d * d;
      }
    } else {
      double mx = out[0];
      for (double v : out) mx = std::max(mx, v);
      double s = 0.0;
      for (double v : out) s += std::exp(v - mx);
      for (std::size_t c = 0; c < out.size(); ++c) total -= target(r, c) * (out[c] - mx - std::log(s));
    }
  }
  return total / static_cast<double>(x.rows());
}

/// Every pre-activation of every sample, layer by layer, flattened.
inline std::vector<double> scalar_preactivations(const Network& net, const DenseMatrix& x) {
  std::vector<double> zs;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto xr = x.row(r);
    std::vector<double> h(xr.begin(), xr.end());
    for (const Layer& l : net.layers()) {
      std::vector<double> y(l.spec.out_dim);
      for (std::size_t o = 0; o < l.spec.out_dim; ++o) {
        double s = l.spec.has_bias ? l.bias[o] : 0.0;
        for (std::size_t i = 0; i < l.spec.in_dim; ++i) s += l.weight(o, i) * h[i];
        zs.push_back(s);
        y[o] = scalar_activation(l.spec.activation, s);
      }
      h = std::move(y);
    }
  }
  return zs;
}

struct GradCheck {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;
};

/// Central differences of scalar_loss against `analytic`, laid out like
/// Network::parameters(). Coordinates whose perturbation moves any
/// pre-activation across or within 1e-3 of zero are skipped for networks that
/// contain relu layers. Relative error uses max(|g|, |fd|, 1e-4) as the
/// denominator so that vanishing gradients are compared absolutely.
inline GradCheck finite_difference_check(Network net, const DenseMatrix& x, const DenseMatrix& target,
                                         Loss loss, const std::vector<std::vector<double>>& analytic,
                                         double h = 1e-5) {
  bool has_relu = false;
  for (const Layer& l : net.layers()) has_relu |= l.spec.activation == Activation::relu;
  GradCheck out;
  auto params = net.parameters();
  for (std::size_t p = 0; p < params.size(); ++p) {
    for (std::size_t i = 0; i < params[p].values.size(); ++i) {
      const double w0 = params[p].values[i];
      params[p].values[i] = w0 + h;
      const double lp = scalar_loss(net, x, target, loss);
      const auto zp = has_relu ? scalar_preactivations(net, x) : std::vector<double>{};
      params[p].values[i] = w0 - h;
      const double lm = scalar_loss(net, x, target, loss);
      const auto zm = has_relu ? scalar_preactivations(net, x) : std::vector<double>{};
      params[p].values[i] = w0;
      bool kink = false;
      for (std::size_t k = 0; k < zp.size() && !kink; ++k) {
        if (zp[k] == zm[k]) continue;  // unaffected unit
        kink = (zp[k] > 0) != (zm[k] > 0) || std::abs(zp[k]) < 1e-3 || std::abs(zm[k]) < 1e-3;
      }
      if (kink) {
        ++out.skipped;
        continue;
      }
      const double fd = (lp - lm) / (2.0 * h);
      const double g = analytic[p][i];
      const double rel = std::abs(g - fd) / std::max({std::abs(g), std::abs(fd), 1e-4});
      out.max_rel_error = std::max(out.max_rel_error, rel);
      ++out.checked;
    }
  }
  return out;
}

/// Textbook scalar SGD-momentum / Adam / LaProp, written out independently of
/// the library.
struct ScalarOptimizer {
  OptimizerSpec spec;
  double m = 0.0;
  double n = 0.0;
  int t = 0;

  double step(double w, double g) {
    ++t;
    const double cm = spec.bias_correction ? 1.0 - std::pow(spec.mu, t) : 1.0;
    const double cn = spec.bias_correction ? 1.0 - std::pow(spec.nu, t) : 1.0;
    if (spec.kind == OptimizerKind::sgd) {
      m = spec.mu * m + g;
      return w - spec.lr * m;
    }
    n = spec.nu * n + (1.0 - spec.nu) * g * g;
    if (spec.kind == OptimizerKind::adam) {
      m = spec.mu * m + (1.0 - spec.mu) * g;
      const double m_hat = m / cm;
      return w - spec.lr * m_hat / (std::sqrt(n / cn) + spec.eps);
    }
    m = spec.mu * m + (1.0 - spec.mu) * g / (std::sqrt(n / cn) + spec.eps);
    return w - spec.lr * m / cm;
  }
};

/// Analytic standard Cauchy CDF.
inline double cauchy_cdf(double x, double scale) { return 0.5 + std::atan(x / scale) / std::numbers::pi; }

/// Kolmogorov-Smirnov sup distance between a sample and a CDF.
template <typename Cdf>
double ks_distance(std::vector<double> sample, Cdf cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
  }
  return d;
}

}  // namespace volkit::oracle

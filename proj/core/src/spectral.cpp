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

#include "volkit/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "volkit/csv.hpp"
#include "volkit/errors.hpp"

namespace volkit {

PowerIterationResult power_iteration(const DenseMatrix& w, std::size_t iters, double tol,
                                     SeededRng& rng) {
  if (iters == 0) throw DomainError("power_iteration: iters must be >= 1");
  PowerIterationResult res;
  if (max_abs(w.data()) == 0.0) {
    res.converged = true;
    return res;
  }

  std::vector<double> v(w.cols());
  for (double& x : v) x = rng.next_normal();
  double nv = norm2(v);
  for (double& x : v) x /= nv;

  double estimate = 0.0;
  for (std::size_t k = 0; k < iters; ++k) {
    std::vector<double> u = matvec(w, v);
    const double s = norm2(u);
    res.iterations = k + 1;
    if (s == 0.0) {
      // Start vector fell in the null space; restart from a fresh direction.
      for (double& x : v) x = rng.next_normal();
      nv = norm2(v);
      for (double& x : v) x /= nv;
      continue;
    }
    const double prev = estimate;
    estimate = std::max(estimate, s);
    if (k > 0 && std::abs(s - prev) <= tol * s) {
      res.converged = true;
      break;
    }
    for (double& x : u) x /= s;
    v = transposed_matvec(w, u);
    nv = norm2(v);
    for (double& x : v) x /= nv;
  }
  res.value = estimate;
  return res;
}

double power_iteration_smax(const DenseMatrix& w, SeededRng& rng, std::size_t iters, double tol) {
  return power_iteration(w, iters, tol, rng).value;
}

SpectralReport check_prop1(const DenseMatrix& w, double volume, SeededRng& rng, double tol) {
  if (!(volume >= 0.0)) throw DomainError("check_prop1: V must be >= 0");
  SpectralReport r;
  r.rows = w.rows();
  r.cols = w.cols();
  r.volume = volume;
  r.entry_max = max_abs(w.data());
  r.s_max_estimate = power_iteration_smax(w, rng);
  r.bound = volume * static_cast<double>(std::max(r.rows, r.cols));
  r.sqrt_bound = volume * std::sqrt(static_cast<double>(r.rows * r.cols));
  r.precondition_ok = r.entry_max <= volume;
  r.pass = r.precondition_ok && r.s_max_estimate <= r.bound + tol &&
           r.s_max_estimate <= r.sqrt_bound + tol;
  r.lipschitz_product = r.s_max_estimate;
  return r;
}

Prop2Report check_prop2(const Network& net, SeededRng& rng, double tol) {
  Prop2Report out;
  out.lipschitz_product = 1.0;
  out.entry_bounds_ok = true;
  for (std::size_t i = 0; i < net.depth(); ++i) {
    const DenseMatrix& w = net.layers()[i].weight;
    const double volume = 1.0 / static_cast<double>(std::max(w.rows(), w.cols()));
    SpectralReport r = check_prop1(w, volume, rng);
    r.layer = i;
    out.entry_bounds_ok = out.entry_bounds_ok && r.precondition_ok;
    out.lipschitz_product *= r.s_max_estimate;
    out.layers.push_back(r);
  }
  for (auto& r : out.layers) r.lipschitz_product = out.lipschitz_product;
  out.pass = out.entry_bounds_ok && out.lipschitz_product <= 1.0 + tol;
  return out;
}

std::string spectral_csv_header() {
  return "layer,rows,cols,V,s_max,bound,sqrt_bound,entry_max,precondition_ok,lipschitz_product,pass";
}

std::string spectral_csv_row(const SpectralReport& r) {
  return csv::join({std::to_string(r.layer), std::to_string(r.rows), std::to_string(r.cols),
                    csv::format_double(r.volume), csv::format_double(r.s_max_estimate),
                    csv::format_double(r.bound), csv::format_double(r.sqrt_bound),
                    csv::format_double(r.entry_max), r.precondition_ok ? "1" : "0",
                    csv::format_double(r.lipschitz_product), r.pass ? "1" : "0"});
}

}  // namespace volkit

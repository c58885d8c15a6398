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
#include <string>
#include <vector>

#include "volkit/linalg.hpp"
#include "volkit/net.hpp"
#include "volkit/rng.hpp"

namespace volkit {

struct PowerIterationResult {
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Largest singular value by alternating W / W^T products from a seeded
/// random start vector. Stops when the relative change of the estimate is
/// below tol or after `iters` iterations. The estimate ||W v|| with unit v
/// never exceeds the true value. A zero matrix returns 0 immediately.
PowerIterationResult power_iteration(const DenseMatrix& w, std::size_t iters, double tol,
                                     SeededRng& rng);

double power_iteration_smax(const DenseMatrix& w, SeededRng& rng, std::size_t iters = 1000,
                            double tol = 1e-10);

/// One row of a spectral check.
struct SpectralReport {
  std::size_t layer = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  double volume = 0.0;
  double s_max_estimate = 0.0;
  double bound = 0.0;            // V * max(rows, cols)
  double sqrt_bound = 0.0;       // V * sqrt(rows * cols), the tighter bound
  double entry_max = 0.0;        // max |W_ij|
  bool precondition_ok = false;  // entry_max <= V
  bool pass = false;
  double lipschitz_product = 0.0;
};

/// s_max(W) <= V max(rows, cols) whenever every |W_ij| <= V. If the entry
/// bound fails the report is flagged and the bound check is skipped
/// (pass = false). Otherwise both bounds are checked with slack `tol`.
SpectralReport check_prop1(const DenseMatrix& w, double volume, SeededRng& rng, double tol = 1e-8);

struct Prop2Report {
  std::vector<SpectralReport> layers;
  double lipschitz_product = 0.0;
  bool entry_bounds_ok = false;  // every layer has max |W_ij| <= 1 / max(rows, cols)
  bool pass = false;             // entry bounds hold and product <= 1 + tol
};

/// Product of per-layer spectral norms, an upper bound on the Lipschitz
/// constant of a network with 1-Lipschitz activations. Each layer is checked
/// against V_i = 1 / max(rows_i, cols_i).
Prop2Report check_prop2(const Network& net, SeededRng& rng, double tol = 1e-6);

/// CSV rendering: header plus one row per report.
std::string spectral_csv_header();
std::string spectral_csv_row(const SpectralReport& r);

}  // namespace volkit

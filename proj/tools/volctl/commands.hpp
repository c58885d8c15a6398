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

#include <limits>
#include <string>
#include <vector>

#include "options.hpp"

namespace volctl {

struct TheoryOptions {
  std::string experiment = "fig4a";
  double a = 1.0;
  std::vector<double> sigmas;  // experiment-specific default when empty
  double v_min = 0.0;
  double v_max = 2.0;
  std::size_t v_points = 41;
  std::size_t samples = 1'000'000;
  std::string estimator = "control_variate";
  bool check = false;
};

void add_theory_options(CLI::App& sub, TheoryOptions& o);
void run_theory(const CommonOptions& common, const TheoryOptions& o);

struct GridOptions {
  std::vector<double> v_grid = {0.25, 0.5, 1.0, 2.0};
  std::vector<double> alpha_grid = {-1.0, -0.5, 0.0, 0.5, 0.99, 0.9999, 1.0};
  std::size_t repeats = 3;
};

struct CellOptions {
  double v = std::numeric_limits<double>::infinity();
  double alpha = 1.0;
};

struct TrainOptions {
  CellOptions cell;
  std::size_t checkpoint_every = 1;
  std::size_t stop_after = 0;
};

struct QuantizeOptions {
  CellOptions cell{0.25, 0.5};
  std::string checkpoint;
  std::string mode = "ternary";
  std::size_t period = 2;
  std::size_t bins = 21;
  double delta = 0.05;
};

struct SpectralOptions {
  std::string checkpoint;
  std::size_t steps = 1000;
  std::size_t probes = 10'000;
  double radius = 1.0;
};

void add_sweep_options(CLI::App& sub, GridOptions& o);
void add_train_options(CLI::App& sub, TrainOptions& o);
void add_quantize_options(CLI::App& sub, QuantizeOptions& o);
void add_spectral_options(CLI::App& sub, SpectralOptions& o);

void run_sweep_cmd(const CommonOptions& common, const TaskOptions& task, const GridOptions& o);
void run_train_cmd(const CommonOptions& common, const TaskOptions& task, const TrainOptions& o,
                   const std::string& effective);
void run_quantize_cmd(const CommonOptions& common, const TaskOptions& task, const QuantizeOptions& o);
void run_spectral_cmd(const CommonOptions& common, const TaskOptions& task, const SpectralOptions& o);

}  // namespace volctl

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
#include <filesystem>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "volkit/sweep.hpp"
#include "volkit/training.hpp"

namespace volctl {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitRuntime = 2;
inline constexpr int kExitCheck = 3;

/// Raised by `--check` runs whose acceptance test failed.
class CheckFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config;
  fs::path out = "volctl-out";
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  bool resume = false;
};

void add_common_options(CLI::App& sub, CommonOptions& o);

/// Dataset, model, optimizer and volumization knobs shared by sweep, train,
/// quantize and spectral.
struct TaskOptions {
  std::size_t classes = 4;
  std::size_t per_class = 250;
  std::size_t dim = 10;
  double spread = 0.6;
  double noise_ratio = 0.0;
  std::vector<std::size_t> hidden = {64};
  std::string activation = "relu";
  std::string optimizer = "adam";
  double lr = 1e-4;
  double mu = 0.9;
  double nu = 0.999;
  double eps = 1e-8;
  bool bias_correction = true;
  std::size_t epochs = 100;
  std::size_t batch_size = 128;
  std::string fan_mode = "fan_in";
  std::string overshoot = "leave";
};

void add_task_options(CLI::App& sub, TaskOptions& o);

/// Sweep spec for the task; grids are left at their defaults.
volkit::SweepSpec task_sweep_spec(const TaskOptions& o, std::uint64_t seed);

/// Train config for one (v, alpha) cell of the task.
volkit::TrainConfig task_train_config(const TaskOptions& o, double v, double alpha);

/// Blob dataset with label noise, reproducible from the seed alone.
volkit::Dataset task_dataset(const TaskOptions& o, std::uint64_t seed);

/// Reads a flat `key = value` file and returns the equivalent `--key=value`
/// arguments. Sections are rejected; `_` in keys is accepted for `-`.
std::vector<std::string> config_arguments(const std::string& path);

/// Effective settings of a parsed subcommand as flat `key=value` lines,
/// excluding the per-invocation keys (config, resume, workers).
std::string effective_config(const CLI::App& sub);

void write_text(const fs::path& path, const std::string& text);
std::string read_text(const fs::path& path);

}  // namespace volctl

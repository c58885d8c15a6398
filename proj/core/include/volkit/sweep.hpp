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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "volkit/data.hpp"
#include "volkit/net.hpp"
#include "volkit/optimizers.hpp"
#include "volkit/training.hpp"
#include "volkit/volumization.hpp"

namespace volkit {

/// (v, alpha) phase-grid sweep over label-noisy blob data.
struct SweepSpec {
  std::vector<double> v_grid = {0.25, 0.5, 1.0, 2.0};
  std::vector<double> alpha_grid = {-1.0, -0.5, 0.0, 0.5, 0.99, 0.9999, 1.0};
  std::size_t repeats = 3;
  std::uint64_t base_seed = 0;
  BlobSpec data;
  double noise_ratio = 0.0;
  std::vector<std::size_t> hidden = {64};
  Activation activation = Activation::relu;
  OptimizerSpec optimizer;
  std::size_t epochs = 100;
  std::size_t batch_size = 128;
  FanMode fan_mode = FanMode::fan_in;
  OvershootPolicy overshoot = OvershootPolicy::leave;

  /// Throws ConfigError / DomainError on an empty grid, zero repeats,
  /// v < 0, alpha outside [-1, 1] or noise_ratio outside [0, 1).
  void validate() const;
  std::size_t cell_count() const noexcept { return v_grid.size() * alpha_grid.size() * repeats; }
  TrainConfig train_config(double v, double alpha) const;
};

struct SweepCell {
  std::size_t index = 0;  // ((v_index * |alpha_grid|) + alpha_index) * repeats + repeat
  std::size_t v_index = 0;
  std::size_t alpha_index = 0;
  std::size_t repeat = 0;
  double v = 0.0;
  double alpha = 0.0;
  std::uint64_t seed = 0;  // stable_hash(base_seed, v_index, alpha_index, repeat)
};

std::vector<SweepCell> enumerate_cells(const SweepSpec& spec);

/// Noisy dataset shared by every cell of one repeat.
Dataset sweep_dataset(const SweepSpec& spec, std::size_t repeat);

struct SweepRow {
  SweepCell cell;
  double best = 0.0;
  double last = 0.0;
  double gap = 0.0;
  bool last_full = false;
  std::string status = "ok";  // "error: <message>" when the cell failed
};

/// Mean over the successful repeats of one (v, alpha) pair.
struct SweepAggregate {
  std::size_t v_index = 0;
  std::size_t alpha_index = 0;
  double v = 0.0;
  double alpha = 0.0;
  std::size_t n_ok = 0;
  double best = 0.0;
  double last = 0.0;
  double gap = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ordered by cell index
  std::vector<SweepAggregate> aggregates;
};

struct SweepOptions {
  /// When set, every finished cell is written to <out_dir>/cells/ and the
  /// canonical table to <out_dir>/sweep.csv.
  std::optional<std::filesystem::path> out_dir;
  std::size_t workers = 1;
  /// Reuse finished cell files found in <out_dir>/cells/.
  bool resume = false;
};

/// Trains one cell. Failures are reported in the row's status.
SweepRow run_cell(const SweepSpec& spec, const SweepCell& cell, const Dataset& data);

/// Runs every cell on a pool of `workers` threads. Each cell owns its
/// network, optimizer and random stream; rows are ordered by cell index so
/// the output does not depend on completion order.
SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& options = {});

std::vector<SweepAggregate> aggregate(const SweepSpec& spec, const std::vector<SweepRow>& rows);

/// Canonical CSV: header, one "cell" row per cell and repeat, then one
/// "mean" row per (v, alpha) whose repeat column holds the number of
/// successful repeats averaged.
std::string sweep_csv(const SweepResult& result);
std::string sweep_csv_header();
std::string sweep_row_csv(const SweepRow& row);
/// Parses a line written by sweep_row_csv; throws ConfigError if malformed.
SweepRow parse_sweep_row(const std::string& line);

}  // namespace volkit

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

#include "volkit/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "byte_io.hpp"
#include "volkit/csv.hpp"
#include "volkit/errors.hpp"

namespace volkit {

namespace {

constexpr std::uint64_t kDataStream = 0xda7a;
constexpr std::uint64_t kNoiseStream = 0x4015e;

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

std::filesystem::path cell_path(const std::filesystem::path& dir, std::size_t index) {
  return dir / "cells" / ("cell_" + std::to_string(index) + ".csv");
}

std::optional<SweepRow> load_cell(const std::filesystem::path& path, const SweepCell& expected) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string header;
  std::string line;
  if (!std::getline(in, header) || !std::getline(in, line)) return std::nullopt;
  try {
    SweepRow row = parse_sweep_row(line);
    // A file from a different spec must not be reused.
    if (row.cell.index != expected.index || row.cell.seed != expected.seed || row.cell.v != expected.v ||
        row.cell.alpha != expected.alpha || row.cell.repeat != expected.repeat) {
      return std::nullopt;
    }
    row.cell = expected;
    return row;
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

void SweepSpec::validate() const {
  if (v_grid.empty() || alpha_grid.empty()) throw ConfigError("sweep: empty v or alpha grid");
  if (repeats == 0) throw ConfigError("sweep: repeats must be >= 1");
  for (double v : v_grid)
    if (!(v >= 0.0)) throw DomainError("sweep: v values must be >= 0");
  for (double a : alpha_grid)
    if (!(a >= -1.0 && a <= 1.0)) throw DomainError("sweep: alpha values must lie in [-1, 1]");
  if (!(noise_ratio >= 0.0 && noise_ratio < 1.0)) throw DomainError("sweep: noise_ratio must lie in [0, 1)");
  train_config(v_grid.front(), alpha_grid.front()).validate();
}

TrainConfig SweepSpec::train_config(double v, double alpha) const {
  TrainConfig c;
  c.model.input_dim = data.dim;
  c.model.hidden = hidden;
  c.model.output_dim = data.n_classes;
  c.model.activation = activation;
  c.model.loss = Loss::softmax_xent;
  c.optimizer = optimizer;
  c.volumization = {v, alpha, fan_mode, overshoot};
  c.epochs = epochs;
  c.batch_size = batch_size;
  return c;
}

std::vector<SweepCell> enumerate_cells(const SweepSpec& spec) {
  std::vector<SweepCell> cells;
  cells.reserve(spec.cell_count());
  for (std::size_t vi = 0; vi < spec.v_grid.size(); ++vi)
    for (std::size_t ai = 0; ai < spec.alpha_grid.size(); ++ai)
      for (std::size_t r = 0; r < spec.repeats; ++r)
        cells.push_back({cells.size(), vi, ai, r, spec.v_grid[vi], spec.alpha_grid[ai],
                         stable_hash({spec.base_seed, vi, ai, r})});
  return cells;
}

Dataset sweep_dataset(const SweepSpec& spec, std::size_t repeat) {
  SeededRng data_rng(stable_hash({spec.base_seed, kDataStream, repeat}));
  SeededRng noise_rng(stable_hash({spec.base_seed, kNoiseStream, repeat}));
  return inject_label_noise(gen_blobs(data_rng, spec.data), spec.noise_ratio, noise_rng);
}

SweepRow run_cell(const SweepSpec& spec, const SweepCell& cell, const Dataset& data) {
  SweepRow row;
  row.cell = cell;
  try {
    Trainer trainer(spec.train_config(cell.v, cell.alpha), data, cell.seed);
    trainer.run();
    const auto& t = trainer.trajectory();
    row.best = t.best();
    row.last = t.last();
    row.gap = t.gap();
    row.last_full = t.last_is_full();
  } catch (const std::exception& e) {
    row.status = "error: " + sanitize(e.what());
  }
  return row;
}

std::vector<SweepAggregate> aggregate(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  std::vector<SweepAggregate> out;
  for (std::size_t vi = 0; vi < spec.v_grid.size(); ++vi) {
    for (std::size_t ai = 0; ai < spec.alpha_grid.size(); ++ai) {
      SweepAggregate a{vi, ai, spec.v_grid[vi], spec.alpha_grid[ai], 0, 0.0, 0.0, 0.0};
      for (const auto& r : rows) {
        if (r.cell.v_index != vi || r.cell.alpha_index != ai || r.status != "ok") continue;
        ++a.n_ok;
        a.best += r.best;
        a.last += r.last;
        a.gap += r.gap;
      }
      if (a.n_ok > 0) {
        const double n = static_cast<double>(a.n_ok);
        a.best /= n;
        a.last /= n;
        a.gap /= n;
      } else {
        a.best = a.last = a.gap = std::nan("");
      }
      out.push_back(a);
    }
  }
  return out;
}

SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& options) {
  spec.validate();
  const auto cells = enumerate_cells(spec);
  if (options.out_dir) std::filesystem::create_directories(*options.out_dir / "cells");

  std::vector<Dataset> datasets;
  for (std::size_t r = 0; r < spec.repeats; ++r) datasets.push_back(sweep_dataset(spec, r));

  std::vector<SweepRow> rows(cells.size());
  std::vector<char> done(cells.size(), 0);
  if (options.out_dir && options.resume) {
    for (const auto& c : cells) {
      if (auto row = load_cell(cell_path(*options.out_dir, c.index), c)) {
        rows[c.index] = *row;
        done[c.index] = 1;
      }
    }
  }

  std::atomic<std::size_t> next{0};
  std::mutex writer;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      if (done[i]) continue;
      SweepRow row = run_cell(spec, cells[i], datasets[cells[i].repeat]);
      if (options.out_dir) {
        const std::string text = sweep_csv_header() + "\n" + sweep_row_csv(row) + "\n";
        std::lock_guard lock(writer);
        detail::write_file_atomic(cell_path(*options.out_dir, i).string(),
                                  {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
      }
      rows[i] = std::move(row);
    }
  };

  const std::size_t n_workers = std::max<std::size_t>(1, std::min(options.workers, cells.size()));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SweepResult result{std::move(rows), {}};
  result.aggregates = aggregate(spec, result.rows);
  if (options.out_dir) {
    const std::string text = sweep_csv(result);
    detail::write_file_atomic((*options.out_dir / "sweep.csv").string(),
                              {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
  }
  return result;
}

std::string sweep_csv_header() { return "kind,cell,v,alpha,repeat,seed,best,last,gap,last_full,status"; }

std::string sweep_row_csv(const SweepRow& row) {
  const auto& c = row.cell;
  return csv::join({"cell", std::to_string(c.index), csv::format_double(c.v), csv::format_double(c.alpha),
                    std::to_string(c.repeat), std::to_string(c.seed), csv::format_double(row.best),
                    csv::format_double(row.last), csv::format_double(row.gap), row.last_full ? "1" : "0",
                    row.status});
}

SweepRow parse_sweep_row(const std::string& line) {
  const auto f = csv::split(line);
  if (f.size() != 11 || f[0] != "cell") throw ConfigError("malformed sweep row");
  SweepRow r;
  try {
    r.cell.index = std::stoull(f[1]);
    r.cell.v = csv::parse_double(f[2]);
    r.cell.alpha = csv::parse_double(f[3]);
    r.cell.repeat = std::stoull(f[4]);
    r.cell.seed = std::stoull(f[5]);
  } catch (const std::logic_error&) {
    throw ConfigError("malformed sweep row");
  }
  r.best = csv::parse_double(f[6]);
  r.last = csv::parse_double(f[7]);
  r.gap = csv::parse_double(f[8]);
  r.last_full = f[9] == "1";
  r.status = f[10];
  return r;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  out << sweep_csv_header() << '\n';
  for (const auto& r : result.rows) out << sweep_row_csv(r) << '\n';
  for (const auto& a : result.aggregates) {
    out << csv::join({"mean", "", csv::format_double(a.v), csv::format_double(a.alpha),
                      std::to_string(a.n_ok), "", csv::format_double(a.best), csv::format_double(a.last),
                      csv::format_double(a.gap), "", a.n_ok > 0 ? "ok" : "error: no successful repeats"})
        << '\n';
  }
  return out.str();
}

}  // namespace volkit

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


#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <utility>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "volkit/checkpoint.hpp"
#include "volkit/csv.hpp"
#include "volkit/errors.hpp"
#include "volkit/quantized_training.hpp"
#include "volkit/quantizer.hpp"
#include "volkit/spectral.hpp"

namespace volctl {

namespace {

using namespace volkit;
using csv::format_double;

std::string trajectory_csv(const MetricTrajectory& t) {
  std::ostringstream out;
  out << "epoch,train_loss,train_acc,test_loss,test_acc\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& m = t.epochs()[i];
    out << csv::join({std::to_string(i + 1), format_double(m.train_loss), format_double(m.train_acc),
                      format_double(m.test_loss), format_double(m.test_acc)})
        << '\n';
  }
  return out.str();
}

std::string histogram_csv(const std::vector<WeightHistogram>& hs) {
  std::ostringstream out;
  out << "layer,tensor,V,bin,lo,hi,count,mass_near_walls\n";
  for (const auto& h : hs) {
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      out << csv::join({std::to_string(h.layer), h.is_bias ? "bias" : "weight", format_double(h.volume),
                        std::to_string(b), format_double(h.edges[b]), format_double(h.edges[b + 1]),
                        std::to_string(h.counts[b]), format_double(h.mass_near_walls)})
          << '\n';
    }
  }
  return out.str();
}

void add_cell_options(CLI::App& sub, CellOptions& o) {
  sub.add_option("--v", o.v, "volume multiplier (V = v a); inf disables volumization");
  sub.add_option("--alpha", o.alpha, "volumization discount in [-1, 1]");
}

Network train_lipschitz_demo(const TaskOptions& task, const Dataset& data, std::uint64_t seed, std::size_t steps) {
  const TrainConfig cfg = task_train_config(task, std::numeric_limits<double>::infinity(), 0.0);
  SeededRng rng = SeededRng(seed).derive(0);
  const auto specs = cfg.model.layer_specs();
  Network net = Network::he_uniform(specs, rng, cfg.volumization.fan_mode);
  const auto vols = lipschitz_volumes(net);
  OptimizerState st = OptimizerState::zeros_like(net);
  const DenseMatrix targets = one_hot(data.y_train, data.n_classes);
  const std::size_t n = data.x_train.rows();
  const std::size_t dim = data.x_train.cols();
  const std::size_t batch = std::min(cfg.batch_size, n);
  SeededRng order = SeededRng(seed).derive(1);
  for (std::size_t k = 0; k < steps; ++k) {
    DenseMatrix xb(batch, dim);
    DenseMatrix tb(batch, data.n_classes);
    for (std::size_t r = 0; r < batch; ++r) {
      const std::size_t src = order.next_below(n);
      for (std::size_t c = 0; c < dim; ++c) xb(r, c) = data.x_train(src, c);
      for (std::size_t c = 0; c < data.n_classes; ++c) tb(r, c) = targets(src, c);
    }
    step(net, loss_and_grad(net, xb, tb, cfg.model.loss), st, cfg.optimizer, vols, 0.0, cfg.volumization.overshoot);
  }
  return net;
}

}  // namespace

void add_sweep_options(CLI::App& sub, GridOptions& o) {
  sub.add_option("--v-grid", o.v_grid, "volume multipliers (inf allowed)")->delimiter(',')->allow_extra_args(false);
  sub.add_option("--alpha-grid", o.alpha_grid, "volumization discounts")->delimiter(',')->allow_extra_args(false);
  sub.add_option("--repeats", o.repeats, "seeds per cell")->check(CLI::PositiveNumber);
}

void add_train_options(CLI::App& sub, TrainOptions& o) {
  add_cell_options(sub, o.cell);
  sub.add_option("--checkpoint-every", o.checkpoint_every, "epochs between checkpoints")
      ->check(CLI::PositiveNumber);
  sub.add_option("--stop-after", o.stop_after, "stop after this many epochs in this invocation (0: run to the end)");
}

void add_quantize_options(CLI::App& sub, QuantizeOptions& o) {
  add_cell_options(sub, o.cell);
  sub.add_option("--checkpoint", o.checkpoint, "quantize this trained checkpoint instead of training");
  sub.add_option("--mode", o.mode)->check(CLI::IsMember({"binary", "ternary"}));
  sub.add_option("--period", o.period, "epochs between quantization events")->check(CLI::PositiveNumber);
  sub.add_option("--bins", o.bins, "histogram bins")->check(CLI::Range(std::size_t{3}, std::size_t{100000}));
  sub.add_option("--delta", o.delta, "relative band around the walls")->check(CLI::Range(0.0, 1.0));
}

void add_spectral_options(CLI::App& sub, SpectralOptions& o) {
  sub.add_option("--checkpoint", o.checkpoint, "check this trained checkpoint instead of the 1-Lipschitz demo");
  sub.add_option("--steps", o.steps, "training steps of the demo")->check(CLI::NonNegativeNumber);
  sub.add_option("--probes", o.probes, "random input pairs for the empirical Lipschitz estimate")
      ->check(CLI::PositiveNumber);
  sub.add_option("--radius", o.radius, "input box half-width for the probes")->check(CLI::PositiveNumber);
}

void run_sweep_cmd(const CommonOptions& common, const TaskOptions& task, const GridOptions& o) {
  SweepSpec spec = task_sweep_spec(task, common.seed);
  spec.v_grid = o.v_grid;
  spec.alpha_grid = o.alpha_grid;
  spec.repeats = o.repeats;
  const auto result = run_sweep(spec, {common.out, common.workers, common.resume});
  std::size_t failed = 0;
  for (const auto& r : result.rows) failed += r.status != "ok";
  std::printf("%-8s %-8s %-4s %-10s %-10s %-10s\n", "v", "alpha", "ok", "best", "last", "gap");
  for (const auto& a : result.aggregates)
    std::printf("%-8g %-8g %-4zu %-10.4f %-10.4f %-10.4f\n", a.v, a.alpha, a.n_ok, a.best, a.last, a.gap);
  std::printf("wrote %s (%zu cells, %zu failed)\n", (common.out / "sweep.csv").string().c_str(), result.rows.size(),
              failed);
  if (failed == result.rows.size()) throw NumericError("every sweep cell failed");
}

void run_train_cmd(const CommonOptions& common, const TaskOptions& task, const TrainOptions& o,
                   const std::string& effective) {
  const fs::path ckpt = common.out / "checkpoint.bin";
  const fs::path ini = common.out / "train_effective_config.ini";
  const Dataset data = task_dataset(task, common.seed);
  std::optional<Trainer> trainer;
  if (common.resume && fs::exists(ckpt)) {
    if (!fs::exists(ini) || read_text(ini) != effective) {
      throw ConfigError("--resume: settings differ from the run stored in '" + common.out.string() + "'");
    }
    trainer.emplace(load_checkpoint(ckpt), data);
    std::printf("resuming at epoch %zu\n", trainer->epoch());
  } else {
    if (common.resume) std::printf("no checkpoint in %s, starting fresh\n", common.out.string().c_str());
    trainer.emplace(task_train_config(task, o.cell.v, o.cell.alpha), data, common.seed);
  }
  write_text(ini, effective);

  std::size_t ran = 0;
  while (!trainer->done() && (o.stop_after == 0 || ran < o.stop_after)) {
    trainer->run_epoch();
    ++ran;
    const auto& m = trainer->trajectory().epochs().back();
    std::printf("epoch %4zu  train_loss %.6g  train_acc %.4f  test_loss %.6g  test_acc %.4f\n", trainer->epoch(),
                m.train_loss, m.train_acc, m.test_loss, m.test_acc);
    if (!std::isfinite(m.train_loss)) throw NumericError("training loss is not finite at epoch " +
                                                         std::to_string(trainer->epoch()));
    if (trainer->epoch() % o.checkpoint_every == 0 || trainer->done()) save_checkpoint(ckpt, trainer->state());
  }
  save_checkpoint(ckpt, trainer->state());

  const auto& t = trainer->trajectory();
  write_text(common.out / "trajectory.csv", trajectory_csv(t));
  if (!t.empty()) {
    std::ostringstream s;
    s << "epochs,best,last,gap,last_full\n"
      << csv::join({std::to_string(t.size()), format_double(t.best()), format_double(t.last()),
                    format_double(t.gap()), t.last_is_full() ? "1" : "0"})
      << '\n';
    write_text(common.out / "summary.csv", s.str());
    std::printf("best %.4f  last %.4f  gap %.4f%s\n", t.best(), t.last(), t.gap(),
                trainer->done() ? "" : "  (stopped early; continue with --resume)");
  }
}

void run_quantize_cmd(const CommonOptions& common, const TaskOptions& task, const QuantizeOptions& o) {
  const QuantMode mode = parse_quant_mode(o.mode);
  const Dataset data = task_dataset(task, common.seed);
  std::optional<Network> float_net;
  std::optional<Network> quant_net;
  std::vector<LayerVolume> volumes;
  double float_acc = 0.0;
  double quant_acc = 0.0;
  if (!o.checkpoint.empty()) {
    TrainerState state = load_checkpoint(o.checkpoint);
    const Trainer eval(state, data);
    volumes = eval.volumes();
    float_net = state.network;
    quant_net = state.network;
    quantize_network(*quant_net, volumes, mode);
    float_acc = eval.evaluate(*float_net).test_acc;
    quant_acc = eval.evaluate(*quant_net).test_acc;
  } else {
    const auto r = quantized_training(task_train_config(task, o.cell.v, o.cell.alpha), data, common.seed,
                                      {mode, o.period});
    write_text(common.out / "trajectory.csv", trajectory_csv(r.trajectory));
    volumes = r.volumes;
    float_net = r.float_network;
    quant_net = r.quantized_network;
    float_acc = r.float_test_acc;
    quant_acc = r.quantized_test_acc;
  }

  const QuantizedModel model = pack_network(*float_net, volumes, mode);
  save_quantized(common.out / "model.vqnt", model);
  write_text(common.out / "histogram.csv", histogram_csv(weight_histogram(*float_net, volumes, o.bins, o.delta)));
  const double mass = weight_mass_near_walls(*float_net, volumes, o.delta);
  const double ratio = float_acc > 0.0 ? quant_acc / float_acc : 0.0;
  std::ostringstream s;
  s << "mode,float_test_acc,quantized_test_acc,ratio,mass_near_walls,parameters,bits_per_weight,model_bytes\n"
    << csv::join({std::string(to_string(mode)), format_double(float_acc), format_double(quant_acc),
                  format_double(ratio), format_double(mass), std::to_string(float_net->parameter_count()),
                  std::to_string(bits_per_weight(mode)), std::to_string(fs::file_size(common.out / "model.vqnt"))})
    << '\n';
  write_text(common.out / "quantize_summary.csv", s.str());
  std::printf("%s: float acc %.4f, quantized acc %.4f (ratio %.4f), %.1f%% of weights within %g V of a wall\n",
              std::string(to_string(mode)).c_str(), float_acc, quant_acc, ratio, 100.0 * mass, o.delta);
}

void run_spectral_cmd(const CommonOptions& common, const TaskOptions& task, const SpectralOptions& o) {
  auto [net, volumes] = [&]() -> std::pair<Network, std::vector<LayerVolume>> {
    if (!o.checkpoint.empty()) {
      TrainerState state = load_checkpoint(o.checkpoint);
      auto v = derive_layer_volumes(state.network, state.config.volumization);
      return {std::move(state.network), std::move(v)};
    }
    const Dataset data = task_dataset(task, common.seed);
    Network trained = train_lipschitz_demo(task, data, common.seed, o.steps);
    auto v = lipschitz_volumes(trained);
    return {std::move(trained), std::move(v)};
  }();

  SeededRng rng = SeededRng(common.seed).derive(2);
  std::ostringstream prop1;
  prop1 << spectral_csv_header() << '\n';
  bool prop1_ok = true;
  for (const auto& v : volumes) {
    if (v.is_bias) continue;
    const DenseMatrix& w = net.layers()[v.layer].weight;
    // alpha > 0 leaves entries outside the wall, and v = inf has no wall:
    // fall back to the largest entry, the tightest volume the bound accepts.
    double entry_max = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) entry_max = std::max(entry_max, std::abs(w.data()[i]));
    const double volume = entry_max > v.volume ? entry_max : v.volume;
    auto rep = check_prop1(w, volume, rng);
    rep.layer = v.layer;
    prop1_ok = prop1_ok && rep.pass;
    prop1 << spectral_csv_row(rep) << '\n';
    std::printf("layer %zu (%zux%zu): s_max %.6g <= V sqrt(rc) %.6g <= V max(r,c) %.6g  %s\n", rep.layer, rep.rows,
                rep.cols, rep.s_max_estimate, rep.sqrt_bound, rep.bound, rep.pass ? "ok" : "VIOLATED");
  }
  write_text(common.out / "spectral.csv", prop1.str());

  const auto p2 = check_prop2(net, rng);
  std::ostringstream prop2;
  prop2 << spectral_csv_header() << '\n';
  for (const auto& rep : p2.layers) prop2 << spectral_csv_row(rep) << '\n';
  write_text(common.out / "spectral_lipschitz.csv", prop2.str());

  const double emp = empirical_lipschitz(net, rng, o.probes, o.radius);
  std::ostringstream s;
  s << "lipschitz_product,empirical_lipschitz,entry_bounds_ok,per_layer_bounds_ok,lipschitz_le_1\n"
    << csv::join({format_double(p2.lipschitz_product), format_double(emp), p2.entry_bounds_ok ? "1" : "0",
                  prop1_ok ? "1" : "0", p2.pass ? "1" : "0"})
    << '\n';
  write_text(common.out / "spectral_summary.csv", s.str());
  std::printf("product of spectral norms %.6g, empirical Lipschitz %.6g, 1-Lipschitz configuration %s\n",
              p2.lipschitz_product, emp, p2.entry_bounds_ok ? "holds" : "does not hold");
}

}  // namespace volctl

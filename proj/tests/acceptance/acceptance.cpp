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


// Runs every acceptance criterion and prints one PASS/FAIL line per
// criterion. Exit status is 0 only when all criteria pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "volkit/checkpoint.hpp"
#include "volkit/data.hpp"
#include "volkit/optimizers.hpp"
#include "volkit/quantized_training.hpp"
#include "volkit/quantizer.hpp"
#include "volkit/spectral.hpp"
#include "volkit/sweep.hpp"
#include "volkit/theory.hpp"
#include "volkit/training.hpp"

namespace {

using namespace volkit;
namespace th = volkit::theory;
namespace fs = std::filesystem;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

th::TeacherStudentProblem uniform_problem(double a, double sigma, std::size_t d = 1) {
  th::TeacherStudentProblem p;
  p.d = d;
  p.a = a;
  p.noise = {th::NoiseKind::uniform, sigma};
  return p;
}

// Shared desk-scale task: 4-class Gaussian blobs in 10 dimensions.
BlobSpec desk_blobs() { return BlobSpec{4, 250, 10, 0.6}; }

TrainConfig desk_config(std::size_t hidden, double v, double alpha) {
  TrainConfig c;
  c.model.input_dim = 10;
  c.model.hidden = {hidden};
  c.model.output_dim = 4;
  c.optimizer.lr = 1e-3;
  c.batch_size = 32;
  c.epochs = 100;
  c.volumization.v = v;
  c.volumization.alpha = alpha;
  return c;
}

Outcome theorem1() {
  bool ok = true;
  std::string d;
  for (double sigma : {0.25, 0.5, 1.0}) {
    const double want = (1.0 - 27.0 * sigma / 64.0) * sigma * sigma / 3.0;
    const auto e = th::monte_carlo_b2(uniform_problem(1.0, sigma), 1.0 - sigma / 2.0, SeededRng(101), 10'000'000);
    const double rel = std::abs(e.mean - want) / want;
    ok = ok && rel < 0.02;
    d += fmt("sigma=%.2f mc=%.6f want=%.6f rel=%.1e; ", sigma, e.mean, want, rel);
  }
  return {ok, d};
}

Outcome theorem2() {
  const double sigma = 0.5, noise = sigma * sigma / 3.0;
  const auto grid = th::linear_grid(0.0, 2.0, 41);
  const auto curve = th::monte_carlo_curve(uniform_problem(1.0, sigma), grid, 202, 10'000'000);
  bool ok = true;
  double worst_inside = -kInf, worst_outside = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double V = grid[i], e = curve.errors[i], se = curve.stderrs[i];
    if (V > 0.5 + 1e-12 && V < 1.5 - 1e-12) {
      ok = ok && e < noise - 3.0 * se;
      worst_inside = std::max(worst_inside, (e - noise) / std::max(se, 1e-300));
    } else if (V >= 1.5 - 1e-12) {
      ok = ok && std::abs(e - noise) <= 3.0 * se;
      worst_outside = std::max(worst_outside, std::abs(e - noise));
    }
  }
  return {ok, fmt("max inside (err-s2/3)/SE=%.1f, max |err-s2/3| beyond 1.5=%.1e", worst_inside, worst_outside)};
}

Outcome fig4a() {
  const auto grid = th::linear_grid(0.0, 2.0, 41);
  const double cell = grid[1] - grid[0];
  bool ok = true;
  double worst = 0.0;
  for (int k = 1; k <= 10; ++k) {
    const double sigma = 0.1 * k;
    const auto curve = th::monte_carlo_curve(uniform_problem(1.0, sigma), grid, 303 + k, 10'000'000);
    const double dev = std::abs(grid[th::argmin(curve)] - (1.0 - sigma / 2.0));
    worst = std::max(worst, dev);
    ok = ok && dev <= cell + 1e-12;
  }
  return {ok, fmt("max |argmin V - (a - sigma/2)| = %.3f, grid cell %.3f", worst, cell)};
}

Outcome theorem3() {
  const auto mc = th::shrinkage_mc(1.0, {th::NoiseKind::uniform, 1.0}, 1.0, SeededRng(404), 10'000'000);
  const double want = 1.0 / 6.0;
  const double rel_mc = std::abs(mc.mean - want) / want;
  const double step = 0.1;
  const double alpha = th::alpha_for_weight_decay(1.0, step);
  const auto gf = th::gradient_flow_sim(uniform_problem(1.0, 1.0, 200'000), 0.0, alpha, step, 100'000, 1e-10,
                                        SeededRng(405));
  const double rel_gf = std::abs(gf.error - want) / want;
  return {rel_mc < 0.02 && gf.converged && rel_gf < 0.05,
          fmt("shrinkage mc=%.6f rel=%.1e; gradient flow (alpha=%.6f, %zu steps) err=%.6f rel=%.1e", mc.mean,
              rel_mc, alpha, gf.steps, gf.error, rel_gf)};
}

Outcome fig4b() {
  const auto grid = th::linear_grid(0.05, 3.0, 60);
  const auto c = th::cauchy_comparison(1.0, 1.0, grid, 505, 1'000'000);
  const double vol = c.volumization.errors[c.best_index];
  const auto& pre = c.unregularized_prefix_errors;
  const bool grows = pre.size() >= 2 && pre.back() > pre.front() && c.unregularized_divergent;
  const bool ok = vol < 1.0 / 3.0 && c.weight_decay_error == 1.0 / 3.0 && c.unregularized_error > 10.0 * vol && grows;
  std::string d = fmt("vol best V=%.2f err=%.4f; constant=%.17g; unreg prefixes", grid[c.best_index], vol,
                      c.weight_decay_error);
  for (std::size_t i = 0; i < pre.size(); ++i) d += fmt(" n=%zu:%.3g", c.unregularized_prefix_sizes[i], pre[i]);
  return {ok, d};
}

Network scalar_net(double w) {
  return Network({Layer{{1, 1, Activation::identity, false}, DenseMatrix{{w}}, {}, std::nullopt}});
}

Outcome special_cases() {
  // l(w) = (w - 1)^2 / 2 from w0 = 2 keeps the iterate crossing small walls.
  const DenseMatrix x{{1.0}}, y{{1.0}};
  std::size_t mismatches = 0;
  for (OptimizerKind kind : {OptimizerKind::sgd, OptimizerKind::adam, OptimizerKind::laprop}) {
    OptimizerSpec spec;
    spec.kind = kind;
    spec.lr = kind == OptimizerKind::sgd ? 0.05 : 0.02;
    struct Case {
      double V, alpha;
    };
    for (Case c : {Case{0.0, 0.995}, Case{0.0, 0.9}, Case{0.3, 0.0}, Case{0.7, 0.0}, Case{0.3, 1.0}, Case{kInf, 1.0}}) {
      Network net = scalar_net(2.0);
      OptimizerState st = OptimizerState::zeros_like(net);
      const std::vector<LayerVolume> vols{{0, false, c.V}};
      oracle::ScalarOptimizer ref{spec};
      double w = 2.0;
      for (int k = 0; k < 1000; ++k) {
        step(net, loss_and_grad(net, x, y, Loss::mse), st, spec, vols, c.alpha);
        w = ref.step(w, w - 1.0);
        if (c.alpha == 1.0) {
          // identity
        } else if (c.V == 0.0) {
          if (w != 0.0) {
            w *= c.alpha;
            ref.m *= c.alpha;
          }
        } else if (std::abs(w) > c.V) {
          w = std::min(std::max(w, -c.V), c.V);
          ref.m = 0.0;
        }
        if (net.layers()[0].weight(0, 0) != w || st.m[0][0] != ref.m || st.n[0][0] != ref.n) ++mismatches;
      }
    }
  }
  return {mismatches == 0, fmt("3 optimizers x 6 (V, alpha) cases x 1000 steps, %zu bitwise mismatches", mismatches)};
}

Outcome prop1() {
  SeededRng rng(707);
  std::size_t failures = 0, precondition = 0;
  double worst = -kInf;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t r = 1 + rng.next_below(64), c = 1 + rng.next_below(64);
    const double V = std::pow(10.0, -2.0 + 3.0 * rng.next_unit());
    const DenseMatrix w(r, c, sample_uniform(rng, -V, V, r * c));
    const auto rep = check_prop1(w, V, rng);
    precondition += !rep.precondition_ok;
    if (!rep.pass || rep.s_max_estimate > rep.sqrt_bound + 1e-8) ++failures;
    worst = std::max(worst, rep.s_max_estimate / rep.sqrt_bound);
  }
  return {failures == 0 && precondition == 0,
          fmt("1000 matrices, %zu failures, max s_max / (V sqrt(rows cols)) = %.3f", failures, worst)};
}

Outcome prop2() {
  SeededRng data_rng(808);
  const Dataset data = gen_blobs(data_rng, desk_blobs());
  SeededRng rng(809);
  const std::vector<LayerSpec> specs{{10, 32, Activation::relu, true},
                                     {32, 16, Activation::relu, true},
                                     {16, 4, Activation::identity, true}};
  Network net = Network::he_uniform(specs, rng);
  const auto vols = lipschitz_volumes(net);
  OptimizerState st = OptimizerState::zeros_like(net);
  OptimizerSpec spec;
  spec.lr = 1e-3;
  const DenseMatrix targets = one_hot(data.y_train, 4);
  const std::size_t batch = 32, n = data.x_train.rows();
  for (std::size_t k = 0; k < 1000; ++k) {
    DenseMatrix xb(batch, 10), tb(batch, 4);
    for (std::size_t r = 0; r < batch; ++r) {
      const std::size_t src = rng.next_below(n);
      for (std::size_t c = 0; c < 10; ++c) xb(r, c) = data.x_train(src, c);
      for (std::size_t c = 0; c < 4; ++c) tb(r, c) = targets(src, c);
    }
    step(net, loss_and_grad(net, xb, tb, Loss::softmax_xent), st, spec, vols, 0.0);
  }
  const auto rep = check_prop2(net, rng);
  const double emp = empirical_lipschitz(net, rng, 10'000, 1.0);
  return {rep.pass && emp <= 1.0 + 1e-6 && emp <= rep.lipschitz_product + 1e-6,
          fmt("product of s_max = %.6f, entry bounds %s, empirical = %.6f, test acc %.3f", rep.lipschitz_product,
              rep.entry_bounds_ok ? "ok" : "violated", emp, accuracy(net, data.x_test, data.y_test))};
}

Outcome gradients() {
  double worst = 0.0;
  std::size_t checked = 0, skipped = 0, combos = 0;
  std::uint64_t seed = 900;
  for (Activation act : {Activation::identity, Activation::relu, Activation::tanh}) {
    for (bool bias : {true, false}) {
      for (Loss loss : {Loss::mse, Loss::softmax_xent}) {
        SeededRng rng(++seed);
        const std::vector<LayerSpec> specs{{4, 6, act, bias}, {6, 5, act, bias}, {5, 3, Activation::identity, bias}};
        Network net = Network::he_uniform(specs, rng);
        for (std::size_t i = 0; i < net.depth(); ++i)
          for (double& b : net.layer(i).bias) b = rng.next_unit() - 0.5;
        const DenseMatrix x(10, 4, sample_uniform(rng, -1.0, 1.0, 40));
        DenseMatrix t(10, 3, sample_uniform(rng, -1.0, 1.0, 30));
        if (loss == Loss::softmax_xent) {
          std::vector<int> labels(10);
          for (int& l : labels) l = static_cast<int>(rng.next_below(3));
          t = one_hot(labels, 3);
        }
        const auto g = loss_and_grad(net, x, t, loss);
        const auto chk = oracle::finite_difference_check(net, x, t, loss, g.grads);
        worst = std::max(worst, chk.max_rel_error);
        checked += chk.checked;
        skipped += chk.skipped;
        ++combos;
      }
    }
  }
  return {worst < 1e-5 && checked > 0,
          fmt("%zu combinations, %zu coordinates checked, %zu skipped at relu kinks, max rel err %.2e", combos,
              checked, skipped, worst)};
}

Outcome label_noise() {
  SweepSpec s;
  s.v_grid = {0.25, kInf};
  s.alpha_grid = {0.5, 1.0};
  s.repeats = 3;
  s.base_seed = 2026;
  s.data = desk_blobs();
  s.noise_ratio = 0.6;
  s.hidden = {64};
  s.optimizer.lr = 1e-3;
  s.epochs = 100;
  s.batch_size = 32;
  const auto res = run_sweep(s);
  const SweepAggregate* vol = nullptr;
  const SweepAggregate* none = nullptr;
  for (const auto& a : res.aggregates) {
    if (a.v == 0.25 && a.alpha == 0.5) vol = &a;
    if (a.v == kInf && a.alpha == 1.0) none = &a;
  }
  const bool ok = vol->n_ok == 3 && none->n_ok == 3 && vol->gap < none->gap && vol->last > none->last;
  return {ok, fmt("Vol(0.25,0.5) gap=%.4f last=%.4f; no-reg gap=%.4f last=%.4f", vol->gap, vol->last, none->gap,
                  none->last)};
}

Outcome quantization() {
  bool ok = true;
  std::string d;
  for (std::uint64_t seed : {1, 2, 3}) {
    SeededRng data_rng(stable_hash({1111, seed}));
    const Dataset data = gen_blobs(data_rng, desk_blobs());
    const auto r = quantized_training(desk_config(256, 0.25, 0.5), data, seed, {QuantMode::ternary, 2});
    const double ratio = r.quantized_test_acc / r.float_test_acc;
    ok = ok && ratio >= 0.9;
    d += fmt("seed %lu float=%.3f ternary=%.3f ratio=%.3f; ", static_cast<unsigned long>(seed), r.float_test_acc,
             r.quantized_test_acc, ratio);
  }
  SeededRng rng(1112);
  const auto xs = sample_uniform(rng, -3.0, 3.0, 1'000'000);
  std::size_t bad = 0;
  for (QuantMode m : {QuantMode::binary, QuantMode::ternary}) {
    const double V = 0.7;
    for (double x : xs) {
      const double q = quantize_value(x, V, m);
      const bool in = q == V || q == -V || (m == QuantMode::ternary && q == 0.0);
      if (!in || quantize_value(q, V, m) != q) ++bad;
    }
  }
  ok = ok && bad == 0;
  d += fmt("invariant violations on 1e6 inputs x 2 modes: %zu", bad);
  return {ok, d};
}

Outcome wall_mass() {
  bool ok = true;
  std::string d;
  for (std::uint64_t seed : {1, 2, 3}) {
    SeededRng data_rng(stable_hash({1212, seed}));
    const Dataset data = gen_blobs(data_rng, desk_blobs());
    Trainer small(desk_config(64, 0.3, 0.99), data, seed);
    small.run();
    Trainer large(desk_config(64, 1.2, 0.9999), data, seed);
    large.run();
    const double ms = weight_mass_near_walls(small.network(), small.volumes(), 0.05);
    const double ml = weight_mass_near_walls(large.network(), large.volumes(), 0.05);
    ok = ok && ms > ml;
    d += fmt("seed %lu: %.4f vs %.4f; ", static_cast<unsigned long>(seed), ms, ml);
  }
  return {ok, d};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  SweepSpec s;
  s.v_grid = {0.25, 1.0, kInf};
  s.alpha_grid = {0.0, 0.5, 1.0};
  s.repeats = 2;
  s.base_seed = 1313;
  s.data = BlobSpec{4, 60, 10, 0.6};
  s.noise_ratio = 0.4;
  s.hidden = {16};
  s.optimizer.lr = 1e-3;
  s.epochs = 12;
  s.batch_size = 32;
  const fs::path root = fs::temp_directory_path() / "volkit_acceptance";
  fs::remove_all(root);
  run_sweep(s, {root / "a", 1, false});
  run_sweep(s, {root / "b", 4, false});
  fs::remove(root / "b" / "cells" / "cell_5.csv");
  fs::remove(root / "b" / "cells" / "cell_11.csv");
  run_sweep(s, {root / "b", 2, true});
  const std::string a = slurp(root / "a" / "sweep.csv");
  const bool sweep_same = !a.empty() && a == slurp(root / "b" / "sweep.csv");

  SeededRng data_rng(1314);
  const Dataset data = gen_blobs(data_rng, desk_blobs());
  TrainConfig c = desk_config(32, 0.5, 0.5);
  c.epochs = 20;
  Trainer full(c, data, 7);
  full.run();
  Trainer first(c, data, 7);
  for (int i = 0; i < 10; ++i) first.run_epoch();
  save_checkpoint(root / "mid.ckpt", first.state());
  Trainer resumed(load_checkpoint(root / "mid.ckpt"), data);
  resumed.run();
  const bool resume_same = resumed.state() == full.state();
  fs::remove_all(root);
  return {sweep_same && resume_same,
          fmt("sweep csv (%zu bytes) identical across workers/resume: %s; resumed trajectory bitwise equal: %s",
              a.size(), sweep_same ? "yes" : "no", resume_same ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "theorem-1 optimum (Monte Carlo, 1e7 samples)", theorem1},
      {2, "theorem-2 improvement interval", theorem2},
      {3, "fig-4a argmin tracks a - sigma/2", fig4a},
      {4, "theorem-3 weight decay optimum", theorem3},
      {5, "fig-4b Cauchy noise comparison", fig4b},
      {6, "special-case equivalences (bitwise)", special_cases},
      {7, "proposition-1 spectral bound", prop1},
      {8, "proposition-2 1-Lipschitz network", prop2},
      {9, "gradient finite-difference checks", gradients},
      {10, "label-noise gap and last accuracy", label_noise},
      {11, "ternary quantized training", quantization},
      {12, "weight mass near the walls", wall_mass},
      {13, "determinism and resume", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s [%2d] %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu acceptance criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

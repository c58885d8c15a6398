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


#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "volkit/csv.hpp"
#include "volkit/errors.hpp"
#include "volkit/theory.hpp"

namespace volctl {

namespace {

namespace th = volkit::theory;
using volkit::SeededRng;
using volkit::csv::format_double;

constexpr const char* kHeader = "method,a,sigma,V,error,stderr,n_samples,seed";

class TheoryCsv {
 public:
  TheoryCsv() { out_ << kHeader << '\n'; }

  void row(std::string_view method, double a, double sigma, double v, double error, double se,
           std::size_t n, std::uint64_t seed) {
    out_ << volkit::csv::join({std::string(method), format_double(a), format_double(sigma), format_double(v),
                               format_double(error), format_double(se), std::to_string(n),
                               std::to_string(seed)})
         << '\n';
  }

  void curve(const th::ErrorCurve& c) {
    for (std::size_t i = 0; i < c.volumes.size(); ++i)
      row(th::to_string(c.method), c.a, c.sigma, c.volumes[i], c.errors[i], c.stderrs[i], c.n_samples, c.seed);
  }

  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

th::TeacherStudentProblem uniform_problem(double a, double sigma, std::size_t d = 1) {
  th::TeacherStudentProblem p;
  p.d = d;
  p.a = a;
  p.noise = {th::NoiseKind::uniform, sigma};
  return p;
}

th::McEstimator parse_estimator(const std::string& s) {
  return s == "plain" ? th::McEstimator::plain : th::McEstimator::control_variate;
}

std::vector<double> sigmas_or(const TheoryOptions& o, std::vector<double> fallback) {
  return o.sigmas.empty() ? fallback : o.sigmas;
}

std::vector<double> default_sigma_grid() { return th::linear_grid(0.1, 1.0, 10); }

// Each sigma gets its own stream so adding a sigma does not perturb others.
std::uint64_t stream_seed(std::uint64_t seed, std::size_t k) { return volkit::stable_hash({seed, 0x7e0, k}); }

void fig4a(const CommonOptions& common, const TheoryOptions& o, TheoryCsv& csv, std::vector<std::string>& failures) {
  const auto grid = th::linear_grid(o.v_min, o.v_max, o.v_points);
  const double cell = o.v_points > 1 ? (o.v_max - o.v_min) / static_cast<double>(o.v_points - 1) : 0.0;
  const auto sigmas = sigmas_or(o, default_sigma_grid());
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    const double s = sigmas[k];
    const auto cf = th::closed_form_curve(o.a, s, grid);
    const auto mc = th::monte_carlo_curve(uniform_problem(o.a, s), grid, stream_seed(common.seed, k), o.samples,
                                          parse_estimator(o.estimator));
    csv.curve(cf);
    csv.curve(mc);
    const double v_star = th::optimal_V(o.a, s).volume;
    const double v_mc = mc.volumes[th::argmin(mc)];
    std::printf("sigma=%-6g V*=%-8.4f argmin closed=%-8.4f mc=%-8.4f\n", s, v_star, cf.volumes[th::argmin(cf)], v_mc);
    if (std::abs(v_mc - v_star) > cell + 1e-12) {
      failures.push_back("sigma=" + format_double(s) + ": Monte-Carlo argmin " + format_double(v_mc) +
                         " is more than one grid cell from V*=" + format_double(v_star));
    }
  }
}

void theorem1(const CommonOptions& common, const TheoryOptions& o, TheoryCsv& csv,
              std::vector<std::string>& failures) {
  const auto sigmas = sigmas_or(o, default_sigma_grid());
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    const double s = sigmas[k];
    const auto opt = th::optimal_V(o.a, s);
    const std::uint64_t seed = stream_seed(common.seed, k);
    const auto mc = th::monte_carlo_b2(uniform_problem(o.a, s), opt.volume, SeededRng(seed), o.samples,
                                       parse_estimator(o.estimator));
    csv.row("closed_form", o.a, s, opt.volume, opt.error, 0.0, 0, 0);
    csv.row("monte_carlo", o.a, s, opt.volume, mc.mean, mc.stderr, mc.n, seed);
    const double rel = opt.error > 0.0 ? std::abs(mc.mean - opt.error) / opt.error : std::abs(mc.mean);
    std::printf("sigma=%-6g V*=%-8.4f b2 closed=%.6e mc=%.6e rel=%.2e\n", s, opt.volume, opt.error, mc.mean, rel);
    if (!(rel < 0.02)) failures.push_back("sigma=" + format_double(s) + ": relative error " + format_double(rel));
  }
}

void theorem3(const CommonOptions& common, const TheoryOptions& o, TheoryCsv& csv,
              std::vector<std::string>& failures) {
  const auto sigmas = sigmas_or(o, {1.0});
  const double step = 0.1;
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    const double s = sigmas[k];
    const auto wd = th::weight_decay_optimum(o.a, s);
    const std::uint64_t seed = stream_seed(common.seed, k);
    const auto mc = th::shrinkage_mc(o.a, {th::NoiseKind::uniform, s}, wd.lambda, SeededRng(seed), o.samples);
    const double alpha = th::alpha_for_weight_decay(wd.lambda, step);
    const std::size_t d = std::min<std::size_t>(o.samples, 200'000);
    const std::uint64_t flow_seed = volkit::stable_hash({seed, 1});
    const auto gf = th::gradient_flow_sim(uniform_problem(o.a, s, d), 0.0, alpha, step, 100'000, 1e-10,
                                          SeededRng(flow_seed));
    csv.row("closed_form", o.a, s, 0.0, wd.error, 0.0, 0, 0);
    csv.row("monte_carlo", o.a, s, 0.0, mc.mean, mc.stderr, mc.n, seed);
    csv.row("gradient_flow", o.a, s, 0.0, gf.error, 0.0, d, flow_seed);
    const double rel_mc = std::abs(mc.mean - wd.error) / wd.error;
    const double rel_gf = std::abs(gf.error - wd.error) / wd.error;
    std::printf("sigma=%-6g lambda*=%.6g alpha=%.8f closed=%.6e mc=%.6e (rel %.2e) flow=%.6e (rel %.2e, %zu steps)\n",
                s, wd.lambda, alpha, wd.error, mc.mean, rel_mc, gf.error, rel_gf, gf.steps);
    if (!(rel_mc < 0.02)) failures.push_back("sigma=" + format_double(s) + ": shrinkage MC rel " + format_double(rel_mc));
    if (!gf.converged || !(rel_gf < 0.05))
      failures.push_back("sigma=" + format_double(s) + ": gradient flow rel " + format_double(rel_gf) +
                         (gf.converged ? "" : " (not converged)"));
  }
}

void fig4b(const CommonOptions& common, const TheoryOptions& o, TheoryCsv& csv, std::vector<std::string>& failures) {
  const auto grid = th::linear_grid(o.v_min, o.v_max, o.v_points);
  const auto sigmas = sigmas_or(o, {1.0});
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    const double s = sigmas[k];
    const std::uint64_t seed = stream_seed(common.seed, k);
    const auto c = th::cauchy_comparison(o.a, s, grid, seed, o.samples);
    const double inf = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < c.unregularized_prefix_sizes.size(); ++i)
      csv.row("unregularized", o.a, s, inf, c.unregularized_prefix_errors[i], 0.0, c.unregularized_prefix_sizes[i],
              seed);
    csv.row("weight_decay_optimal", o.a, s, 0.0, c.weight_decay_error, 0.0, 0, 0);
    for (std::size_t i = 0; i < c.volumization.volumes.size(); ++i)
      csv.row("volumization", o.a, s, c.volumization.volumes[i], c.volumization.errors[i],
              c.volumization.stderrs[i], c.volumization.n_samples, c.volumization.seed);
    const double best = c.volumization.errors[c.best_index];
    std::printf("sigma=%-6g unregularized=%.6g%s weight_decay=%.6g volumization=%.6g at V=%.4f\n", s,
                c.unregularized_error, c.unregularized_divergent ? " (divergent)" : "", c.weight_decay_error, best,
                c.volumization.volumes[c.best_index]);
    const std::string tag = "sigma=" + format_double(s) + ": ";
    if (!(best < c.weight_decay_error)) failures.push_back(tag + "volumization does not beat weight decay");
    if (!(c.unregularized_error > 10.0 * best)) failures.push_back(tag + "unregularized error is not >10x volumization");
    if (!c.unregularized_divergent) failures.push_back(tag + "unregularized error does not grow with n");
  }
}

}  // namespace

void add_theory_options(CLI::App& sub, TheoryOptions& o) {
  sub.add_option("experiment,--experiment", o.experiment, "fig4a | fig4b | theorem1 | theorem3")
      ->check(CLI::IsMember({"fig4a", "fig4b", "theorem1", "theorem3"}));
  sub.add_option("--a", o.a, "teacher half-width")->check(CLI::PositiveNumber);
  sub.add_option("--sigma-grid", o.sigmas, "noise levels (comma separated)")->delimiter(',')->allow_extra_args(false);
  sub.add_option("--v-min", o.v_min)->check(CLI::NonNegativeNumber);
  sub.add_option("--v-max", o.v_max)->check(CLI::NonNegativeNumber);
  sub.add_option("--v-points", o.v_points)->check(CLI::Range(std::size_t{2}, std::size_t{1'000'000}));
  sub.add_option("--samples", o.samples, "Monte-Carlo samples per point")
      ->check(CLI::Range(std::size_t{1000}, std::size_t{1'000'000'000}));
  sub.add_option("--estimator", o.estimator)->check(CLI::IsMember({"control_variate", "plain"}));
  sub.add_flag("--check", o.check, "verify the result; exit 3 on failure");
}

void run_theory(const CommonOptions& common, const TheoryOptions& o) {
  if (!(o.v_max > o.v_min)) throw volkit::ConfigError("v-max must exceed v-min");
  TheoryCsv csv;
  std::vector<std::string> failures;
  if (o.experiment == "fig4a") fig4a(common, o, csv, failures);
  if (o.experiment == "theorem1") theorem1(common, o, csv, failures);
  if (o.experiment == "theorem3") theorem3(common, o, csv, failures);
  if (o.experiment == "fig4b") fig4b(common, o, csv, failures);
  const fs::path path = common.out / ("theory_" + o.experiment + ".csv");
  write_text(path, csv.str());
  std::printf("wrote %s\n", path.string().c_str());
  if (o.check) {
    if (!failures.empty()) {
      std::string msg;
      for (const auto& f : failures) msg += "\n  " + f;
      throw CheckFailed(o.experiment + msg);
    }
    std::printf("check passed: %s\n", o.experiment.c_str());
  }
}

}  // namespace volctl

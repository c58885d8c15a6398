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

#include "volkit/theory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "volkit/errors.hpp"
#include "volkit/volumization.hpp"

namespace volkit::theory {

namespace {

// Welford running mean / variance.
class RunningStats {
 public:
  void push(double x) noexcept {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double stderr() const noexcept {
    if (n_ < 2) return 0.0;
    return std::sqrt(m2_ / static_cast<double>(n_ - 1) / static_cast<double>(n_));
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

void check_uniform_theory_domain(double a, double sigma) {
  if (!(a > 0.0)) throw DomainError("teacher scale a must be positive");
  if (!(sigma >= 0.0)) throw DomainError("noise sigma must be >= 0");
  if (sigma > a) throw DomainError("closed forms assume sigma <= a");
}

}  // namespace

double NoiseSpec::sample(SeededRng& rng) const {
  if (kind == NoiseKind::uniform) return -sigma + 2.0 * sigma * rng.next_unit();
  return cauchy_from_unit(rng.next_open_unit(), sigma);
}

void TeacherStudentProblem::validate() const {
  if (d == 0) throw DomainError("problem dimension must be >= 1");
  if (!(a > 0.0)) throw DomainError("teacher scale a must be positive");
  if (!(noise.sigma >= 0.0)) throw DomainError("noise sigma must be >= 0");
  if (noise.kind == NoiseKind::cauchy && !(noise.sigma > 0.0)) {
    throw DomainError("Cauchy noise needs a positive scale");
  }
  if (correlation) {
    const DenseMatrix& c = *correlation;
    if (c.rows() != d || c.cols() != d) throw DomainError("correlation matrix must be d x d");
    const auto eig = symmetric_eigen(c);
    if (!(eig.values.front() > 0.0)) throw DomainError("correlation matrix is not positive definite");
  }
}

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::monte_carlo: return "monte_carlo";
    case Method::monte_carlo_plain: return "monte_carlo_plain";
    case Method::gradient_flow: return "gradient_flow";
  }
  return "?";
}

double closed_form_b2(double a, double sigma, double volume) {
  check_uniform_theory_domain(a, sigma);
  if (!(volume >= 0.0)) throw DomainError("closed_form_b2: V must be >= 0");
  const double noise_var = sigma * sigma / 3.0;
  if (volume > a + sigma) return noise_var;
  if (sigma > 0.0 && volume >= a - sigma) {
    const double y = volume - a;
    const double c = 1.0 - (y - sigma) * (y - sigma) / (4.0 * a * sigma);
    return c * noise_var + (1.0 - c) * y * y / 3.0;
  }
  const double gap = a - volume;
  return (volume / a) * noise_var + gap * gap * gap / (3.0 * a);
}

McEstimate monte_carlo_b2(const TeacherStudentProblem& problem, double volume, SeededRng rng,
                          std::size_t n_samples, McEstimator estimator) {
  problem.validate();
  if (!(volume >= 0.0)) throw DomainError("monte_carlo_b2: V must be >= 0");
  if (n_samples == 0) throw DomainError("monte_carlo_b2: n_samples must be >= 1");
  const double a = problem.a;
  const bool cv = estimator == McEstimator::control_variate && problem.noise.kind == NoiseKind::uniform;
  const double offset = cv ? problem.noise.sigma * problem.noise.sigma / 3.0 : 0.0;

  RunningStats stats;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double u = -a + 2.0 * a * rng.next_unit();
    const double eta = problem.noise.sample(rng);
    const double w = std::clamp(u + eta, -volume, volume);
    const double err = (w - u) * (w - u);
    stats.push(cv ? err - eta * eta : err);
  }
  return {stats.mean() + offset, stats.stderr(), n_samples};
}

ErrorCurve closed_form_curve(double a, double sigma, std::span<const double> volumes) {
  ErrorCurve c{Method::closed_form, a, sigma, {volumes.begin(), volumes.end()}, {}, {}, 0, 0};
  for (double v : volumes) {
    c.errors.push_back(closed_form_b2(a, sigma, v));
    c.stderrs.push_back(0.0);
  }
  return c;
}

ErrorCurve monte_carlo_curve(const TeacherStudentProblem& problem, std::span<const double> volumes,
                             std::uint64_t seed, std::size_t n_samples, McEstimator estimator) {
  const bool cv = estimator == McEstimator::control_variate && problem.noise.kind == NoiseKind::uniform;
  ErrorCurve c{cv ? Method::monte_carlo : Method::monte_carlo_plain,
               problem.a,
               problem.noise.sigma,
               {volumes.begin(), volumes.end()},
               {},
               {},
               n_samples,
               seed};
  for (double v : volumes) {
    const McEstimate e = monte_carlo_b2(problem, v, SeededRng(seed), n_samples, estimator);
    c.errors.push_back(e.mean);
    c.stderrs.push_back(e.stderr);
  }
  return c;
}

std::size_t argmin(const ErrorCurve& curve) {
  if (curve.errors.empty()) throw DomainError("argmin of an empty curve");
  return static_cast<std::size_t>(std::min_element(curve.errors.begin(), curve.errors.end()) -
                                  curve.errors.begin());
}

OptimalVolume optimal_V(double a, double sigma) {
  check_uniform_theory_domain(a, sigma);
  return {a - sigma / 2.0, (1.0 - 27.0 * sigma / (64.0 * a)) * sigma * sigma / 3.0};
}

WeightDecayOptimum weight_decay_optimum(double a, double sigma) {
  if (!(a > 0.0)) throw DomainError("teacher scale a must be positive");
  if (!(sigma >= 0.0)) throw DomainError("noise sigma must be >= 0");
  const double s2 = sigma * sigma;
  const double a2 = a * a;
  return {s2 / a2, s2 * a2 / (3.0 * (s2 + a2))};
}

McEstimate shrinkage_mc(double a, const NoiseSpec& noise, double lambda, SeededRng rng,
                        std::size_t n_samples) {
  if (!(a > 0.0)) throw DomainError("teacher scale a must be positive");
  if (!(lambda >= 0.0)) throw DomainError("shrinkage_mc: lambda must be >= 0");
  if (n_samples == 0) throw DomainError("shrinkage_mc: n_samples must be >= 1");
  RunningStats stats;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double u = -a + 2.0 * a * rng.next_unit();
    const double eta = noise.sample(rng);
    const double w = (u + eta) / (1.0 + lambda);
    stats.push((w - u) * (w - u));
  }
  return {stats.mean(), stats.stderr(), n_samples};
}

double alpha_for_weight_decay(double lambda, double step) {
  if (!(lambda >= 0.0) || !(step > 0.0)) throw DomainError("alpha_for_weight_decay: bad arguments");
  return 1.0 / (1.0 + step * lambda);
}

GradientFlowResult gradient_flow_sim(const TeacherStudentProblem& problem, double volume,
                                     double alpha, double step, std::size_t max_steps, double tol,
                                     SeededRng rng) {
  problem.validate();
  if (!(tol > 0.0)) throw DomainError("gradient_flow_sim: tol must be positive");
  const std::size_t d = problem.d;
  const bool identity = !problem.correlation.has_value();
  const double lambda_max = identity ? 1.0 : symmetric_eigen(*problem.correlation).values.back();
  if (step <= 0.0) step = 0.1 / lambda_max;
  if (!(step * lambda_max < 2.0)) {
    throw DomainError("gradient_flow_sim: unstable step " + std::to_string(step) +
                      " for lambda_max " + std::to_string(lambda_max) + " (need step * lambda_max < 2)");
  }

  GradientFlowResult r;
  r.teacher.resize(d);
  r.shifted.resize(d);
  for (std::size_t i = 0; i < d; ++i) r.teacher[i] = -problem.a + 2.0 * problem.a * rng.next_unit();
  for (std::size_t i = 0; i < d; ++i) r.shifted[i] = r.teacher[i] + problem.noise.sample(rng);

  std::vector<double> w(d, 0.0);
  std::vector<double> next(d);
  std::vector<double> residual(d);
  const double blowup = 1e12 * (problem.a + max_abs(r.shifted) + 1.0);
  for (std::size_t k = 0; k < max_steps; ++k) {
    for (std::size_t i = 0; i < d; ++i) residual[i] = w[i] - r.shifted[i];
    if (identity) {
      for (std::size_t i = 0; i < d; ++i) next[i] = w[i] - step * residual[i];
    } else {
      const auto g = matvec(*problem.correlation, residual);
      for (std::size_t i = 0; i < d; ++i) next[i] = w[i] - step * g[i];
    }
    volumize_inplace(next, {}, volume, alpha);

    double vel = 0.0;
    for (std::size_t i = 0; i < d; ++i) vel = std::max(vel, std::abs(next[i] - w[i]));
    vel /= step;
    w.swap(next);
    r.steps = k + 1;
    r.velocity = vel;

    const double mx = max_abs(w);
    if (!std::isfinite(mx) || mx > blowup) {
      throw NumericError("gradient_flow_sim: iterate diverged at step " + std::to_string(k + 1) +
                         " (max |w| = " + std::to_string(mx) + ", step = " + std::to_string(step) +
                         ")");
    }
    if (vel < tol) {
      r.converged = true;
      break;
    }
  }

  double sq = 0.0;
  for (std::size_t i = 0; i < d; ++i) sq += (w[i] - r.teacher[i]) * (w[i] - r.teacher[i]);
  r.error = sq / static_cast<double>(d);
  r.student = std::move(w);
  return r;
}

CauchyComparison cauchy_comparison(double a, double sigma, std::span<const double> volumes,
                                   std::uint64_t seed, std::size_t n_samples) {
  if (!(a > 0.0) || !(sigma > 0.0)) throw DomainError("cauchy_comparison: a and sigma must be positive");
  if (n_samples == 0) throw DomainError("cauchy_comparison: n_samples must be >= 1");
  if (volumes.empty()) throw DomainError("cauchy_comparison: empty volume grid");

  SeededRng rng(seed);
  const NoiseSpec noise{NoiseKind::cauchy, sigma};
  std::vector<double> u(n_samples);
  std::vector<double> eta(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    u[i] = -a + 2.0 * a * rng.next_unit();
    eta[i] = noise.sample(rng);
  }

  CauchyComparison out;
  out.a = a;
  out.sigma = sigma;
  out.n_samples = n_samples;

  double sum = 0.0;
  std::size_t next_checkpoint = 1000;
  for (std::size_t i = 0; i < n_samples; ++i) {
    sum += eta[i] * eta[i];
    if (i + 1 == next_checkpoint) {
      out.unregularized_prefix_sizes.push_back(i + 1);
      out.unregularized_prefix_errors.push_back(sum / static_cast<double>(i + 1));
      next_checkpoint *= 10;
    }
  }
  out.unregularized_error = sum / static_cast<double>(n_samples);
  out.unregularized_divergent =
      !out.unregularized_prefix_errors.empty() &&
      out.unregularized_error > out.unregularized_prefix_errors.front();
  out.weight_decay_error = a * a / 3.0;

  out.volumization = ErrorCurve{Method::monte_carlo_plain, a, sigma, {volumes.begin(), volumes.end()},
                                {}, {}, n_samples, seed};
  for (double v : volumes) {
    if (!(v >= 0.0)) throw DomainError("cauchy_comparison: V must be >= 0");
    RunningStats stats;
    for (std::size_t i = 0; i < n_samples; ++i) {
      const double w = std::clamp(u[i] + eta[i], -v, v);
      stats.push((w - u[i]) * (w - u[i]));
    }
    out.volumization.errors.push_back(stats.mean());
    out.volumization.stderrs.push_back(stats.stderr());
  }
  out.best_index = argmin(out.volumization);
  return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  if (points < 2 || !(lo < hi)) throw DomainError("linear_grid: need >= 2 points and lo < hi");
  std::vector<double> g(points);
  const double width = hi - lo;
  for (std::size_t i = 0; i < points; ++i)
    g[i] = lo + width * static_cast<double>(i) / static_cast<double>(points - 1);
  return g;
}

}  // namespace volkit::theory

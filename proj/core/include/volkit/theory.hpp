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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "volkit/linalg.hpp"
#include "volkit/rng.hpp"

namespace volkit::theory {

// Teacher-student model with shifted targets: each teacher weight
// u ~ Unif(-a, a) is observed through u' = u + eta, and the student trained
// with volumization (alpha = 0) converges to clip(u', [-V, V]) when A = I.
// All errors below are per parameter: E[(w - u)^2].

enum class NoiseKind { uniform, cauchy };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::uniform;
  double sigma = 0.0;  // half-width (uniform) or scale (Cauchy)

  double sample(SeededRng& rng) const;
};

struct TeacherStudentProblem {
  std::size_t d = 1;
  double a = 1.0;
  NoiseSpec noise;
  /// Symmetric positive definite correlation matrix; identity when absent.
  std::optional<DenseMatrix> correlation;

  /// Throws DomainError on d = 0, a <= 0, sigma < 0, a non-square,
  /// wrongly sized, asymmetric or non-positive-definite correlation.
  void validate() const;
};

enum class Method { closed_form, monte_carlo, monte_carlo_plain, gradient_flow };
std::string_view to_string(Method m) noexcept;

struct ErrorCurve {
  Method method = Method::closed_form;
  double a = 1.0;
  double sigma = 0.0;
  std::vector<double> volumes;
  std::vector<double> errors;
  std::vector<double> stderrs;  // zeros for closed-form curves
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Exact per-parameter error of the clipped student for uniform teacher and
/// uniform noise, 0 <= sigma <= a. With y = V - a:
///   V <  a - sigma:          (V/a) sigma^2/3 + (a - V)^3 / (3a)
///   a - sigma <= V <= a + sigma:
///                            c_V sigma^2/3 + (1 - c_V) y^2/3,
///                            c_V = 1 - (y - sigma)^2 / (4 a sigma)
///   V >  a + sigma:          sigma^2/3
/// For sigma = 0 this reduces to (a - V)^3 / (3a) for V <= a and 0 beyond.
/// Throws DomainError if a <= 0, sigma < 0, sigma > a or V < 0.
double closed_form_b2(double a, double sigma, double volume);

struct McEstimate {
  double mean = 0.0;
  double stderr = 0.0;
  std::size_t n = 0;
};

enum class McEstimator {
  /// Average of (w - u)^2.
  plain,
  /// Average of (w - u)^2 - eta^2, plus the known E[eta^2] = sigma^2/3.
  /// Unbiased for the same quantity; uniform noise only (falls back to plain
  /// for Cauchy noise, which has no variance).
  control_variate,
};

/// Monte-Carlo estimate of E[(clip(u + eta, V) - u)^2] with its standard
/// error. Draws (u, eta) pairs from `rng` in that order; `rng` is taken by
/// value so repeated calls with the same stream use common random numbers.
McEstimate monte_carlo_b2(const TeacherStudentProblem& problem, double volume, SeededRng rng,
                          std::size_t n_samples, McEstimator estimator = McEstimator::control_variate);

/// closed_form_b2 over a grid.
ErrorCurve closed_form_curve(double a, double sigma, std::span<const double> volumes);

/// monte_carlo_b2 over a grid, every point using the same random stream.
ErrorCurve monte_carlo_curve(const TeacherStudentProblem& problem, std::span<const double> volumes,
                             std::uint64_t seed, std::size_t n_samples,
                             McEstimator estimator = McEstimator::control_variate);

/// Index of the smallest error.
std::size_t argmin(const ErrorCurve& curve);

/// V* = a - sigma/2 and b2(V*) = (1 - 27 sigma / (64 a)) sigma^2 / 3.
struct OptimalVolume {
  double volume;
  double error;
};
OptimalVolume optimal_V(double a, double sigma);

/// Optimal weight-decay strength lambda* = sigma^2 / a^2 for the shrinkage
/// student w = u' / (1 + lambda) and its error sigma^2 a^2 / (3 (sigma^2 + a^2)).
struct WeightDecayOptimum {
  double lambda;
  double error;
};
WeightDecayOptimum weight_decay_optimum(double a, double sigma);

/// Monte-Carlo error of the shrinkage student w = (u + eta) / (1 + lambda).
McEstimate shrinkage_mc(double a, const NoiseSpec& noise, double lambda, SeededRng rng,
                        std::size_t n_samples);

/// Per-step volumization discount that makes the fixed point of
///   w <- alpha * (w - step * (w - u'))      (V = 0)
/// equal the shrinkage solution u' / (1 + lambda): alpha = 1 / (1 + step lambda).
double alpha_for_weight_decay(double lambda, double step);

struct GradientFlowResult {
  std::vector<double> teacher;   // u
  std::vector<double> shifted;   // u' = u + eta
  std::vector<double> student;   // final w
  double error = 0.0;            // (1/d) ||w - u||^2
  double velocity = 0.0;         // ||w_{k+1} - w_k||_inf / step at exit
  std::size_t steps = 0;
  bool converged = false;
};

/// Explicit-Euler gradient flow on (1/2) (w - u')^T A (w - u') from w = 0,
/// with the volumization transform applied after every step. Stops once the
/// flow velocity ||dw||_inf / step drops below tol or after max_steps.
/// step <= 0 selects the default 0.1 / lambda_max(A).
/// Throws DomainError if step * lambda_max(A) >= 2 or tol <= 0, and
/// NumericError with a diagnostic if the iterate diverges anyway.
GradientFlowResult gradient_flow_sim(const TeacherStudentProblem& problem, double volume,
                                     double alpha, double step, std::size_t max_steps, double tol,
                                     SeededRng rng);

/// Heavy-tailed noise comparison (Cauchy noise of scale sigma).
struct CauchyComparison {
  double a = 1.0;
  double sigma = 1.0;
  std::size_t n_samples = 0;
  /// Sample mean of eta^2 over the first 10^k draws, k = 3, 4, ...; it has no
  /// limit because the Cauchy distribution has no variance.
  std::vector<std::size_t> unregularized_prefix_sizes;
  std::vector<double> unregularized_prefix_errors;
  double unregularized_error = 0.0;
  bool unregularized_divergent = false;
  /// Optimal weight decay collapses to the constant model: a^2 / 3.
  double weight_decay_error = 0.0;
  ErrorCurve volumization;
  std::size_t best_index = 0;
};

CauchyComparison cauchy_comparison(double a, double sigma, std::span<const double> volumes,
                                   std::uint64_t seed, std::size_t n_samples);

/// Evenly spaced grid of `points` values from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, std::size_t points);

}  // namespace volkit::theory

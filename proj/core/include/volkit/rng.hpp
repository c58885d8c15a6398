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
#include <vector>

#include "volkit/linalg.hpp"

namespace volkit {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Order-dependent combination of 64-bit words, stable across platforms.
std::uint64_t stable_hash(std::initializer_list<std::uint64_t> words) noexcept;

/// Counter-based generator: the k-th output is
///   mix64(seed + (k + 1) * 0x9e3779b97f4a7c15)
/// i.e. SplitMix64 evaluated at an explicit stream position. Output depends
/// only on (seed, position), so a stream can be saved, resumed or replayed
/// exactly and independent streams are derived without shared state.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed, std::uint64_t position = 0) noexcept
      : seed_(seed), position_(position) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t position() const noexcept { return position_; }

  std::uint64_t next_u64() noexcept;
  /// Uniform in [0, 1) with 53 random bits.
  double next_unit() noexcept;
  /// Uniform in (0, 1); never returns 0.
  double next_open_unit() noexcept;
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t next_below(std::uint64_t n) noexcept;
  /// Standard normal via Box-Muller (consumes two words).
  double next_normal() noexcept;

  /// Independent child stream keyed by `index`.
  SeededRng derive(std::uint64_t index) const noexcept;

  friend bool operator==(const SeededRng&, const SeededRng&) = default;

 private:
  std::uint64_t seed_;
  std::uint64_t position_;
};

/// n draws from Unif[lo, hi). Throws DomainError unless lo < hi.
std::vector<double> sample_uniform(SeededRng& rng, double lo, double hi, std::size_t n);

/// Inverse-CDF Cauchy transform: scale * tan(pi * (u - 1/2)).
double cauchy_from_unit(double u, double scale) noexcept;

/// n draws from the scale-Cauchy distribution. Throws DomainError unless scale > 0.
std::vector<double> sample_cauchy(SeededRng& rng, double scale, std::size_t n);

struct HeUniformInit {
  DenseMatrix weights;
  double scale;  // a = sqrt(6 / fan)
};

/// rows x cols matrix with entries i.i.d. Unif(-a, a), a = sqrt(6 / fan).
HeUniformInit he_uniform_init(SeededRng& rng, std::size_t rows, std::size_t cols,
                              std::size_t fan);

}  // namespace volkit

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

#include "volkit/rng.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "volkit/errors.hpp"

namespace volkit {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t stable_hash(std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t w : words) h = mix64(h ^ mix64(w + kGolden));
  return h;
}

std::uint64_t SeededRng::next_u64() noexcept {
  ++position_;
  return mix64(seed_ + position_ * kGolden);
}

double SeededRng::next_unit() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SeededRng::next_open_unit() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t SeededRng::next_below(std::uint64_t n) noexcept {
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

double SeededRng::next_normal() noexcept {
  const double u1 = next_open_unit();
  const double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

SeededRng SeededRng::derive(std::uint64_t index) const noexcept {
  return SeededRng(mix64(seed_ ^ mix64(index + kGolden)));
}

std::vector<double> sample_uniform(SeededRng& rng, double lo, double hi, std::size_t n) {
  if (!(lo < hi)) {
    throw DomainError("sample_uniform: need lo < hi, got [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + ")");
  }
  const double width = hi - lo;
  std::vector<double> out(n);
  for (auto& x : out) x = lo + width * rng.next_unit();
  return out;
}

double cauchy_from_unit(double u, double scale) noexcept {
  if (u == 0.5) return 0.0;
  return scale * std::tan(std::numbers::pi * (u - 0.5));
}

std::vector<double> sample_cauchy(SeededRng& rng, double scale, std::size_t n) {
  if (!(scale > 0.0)) throw DomainError("sample_cauchy: scale must be positive");
  std::vector<double> out(n);
  for (auto& x : out) x = cauchy_from_unit(rng.next_open_unit(), scale);
  return out;
}

HeUniformInit he_uniform_init(SeededRng& rng, std::size_t rows, std::size_t cols, std::size_t fan) {
  if (fan == 0) throw DomainError("he_uniform_init: fan must be >= 1");
  const double a = std::sqrt(6.0 / static_cast<double>(fan));
  DenseMatrix w(rows, cols);
  for (auto& x : w.data()) x = -a + 2.0 * a * rng.next_unit();
  return {std::move(w), a};
}

}  // namespace volkit

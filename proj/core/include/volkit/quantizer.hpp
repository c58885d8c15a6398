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
#include <span>
#include <string_view>
#include <vector>

#include "volkit/linalg.hpp"
#include "volkit/net.hpp"
#include "volkit/volumization.hpp"

namespace volkit {

enum class QuantMode : std::uint8_t { binary = 1, ternary = 2 };

std::string_view to_string(QuantMode m) noexcept;
QuantMode parse_quant_mode(std::string_view s);

struct QuantizationScheme {
  QuantMode mode = QuantMode::ternary;
  std::size_t period_epochs = 2;

  friend bool operator==(const QuantizationScheme&, const QuantizationScheme&) = default;
};

/// binary:  w >= 0 -> V, otherwise -V
/// ternary: w > V/2 -> V, |w| <= V/2 -> 0, w < -V/2 -> -V
double quantize_value(double w, double volume, QuantMode mode) noexcept;

/// Throws DomainError unless V > 0.
void quantize_inplace(std::span<double> values, double volume, QuantMode mode);
DenseMatrix quantize(const DenseMatrix& weights, double volume, QuantMode mode);

/// Quantizes every tensor of `net` (biases too) with its volume.
/// Throws ConfigError if a volume is not finite and positive.
void quantize_network(Network& net, std::span<const LayerVolume> volumes, QuantMode mode);

struct WeightHistogram {
  std::size_t layer = 0;
  bool is_bias = false;
  double volume = 0.0;
  std::vector<double> edges;          // bins + 1 edges over [-max|w|, max|w|]
  std::vector<std::size_t> counts;    // sums to the tensor size
  double mass_near_walls = 0.0;       // fraction with ||w| - V| <= delta * V
};

/// One histogram per parameter tensor. Throws DomainError if bins < 3.
std::vector<WeightHistogram> weight_histogram(const Network& net, std::span<const LayerVolume> volumes,
                                              std::size_t bins, double delta = 0.05);

/// mass_near_walls over all weight matrices (biases excluded).
double weight_mass_near_walls(const Network& net, std::span<const LayerVolume> volumes,
                              double delta = 0.05);

// Quantized model file:
//   "VQNT" magic, u8 version (1), u8 mode, u32 tensor count, then per tensor
//   u32 rows, u32 cols, f64 V, packed codes; then u32 CRC-32 of everything
//   before it. All integers and floats little-endian. Codes are packed LSB
//   first: binary 1 bit (1 = +V, 0 = -V), ternary 2 bits (0 = 0, 1 = +V,
//   2 = -V). Each tensor's code block is padded to a whole byte.
inline constexpr std::uint8_t kQuantFormatVersion = 1;

struct QuantizedTensor {
  std::size_t rows = 0;
  std::size_t cols = 0;
  double volume = 0.0;
  std::vector<std::uint8_t> packed;

  std::size_t count() const noexcept { return rows * cols; }
};

struct QuantizedModel {
  QuantMode mode = QuantMode::ternary;
  std::vector<QuantizedTensor> tensors;
};

/// Bits per stored weight code.
constexpr std::size_t bits_per_weight(QuantMode m) noexcept { return m == QuantMode::binary ? 1 : 2; }

/// Packs already-quantized values; throws DomainError if a value is not a
/// codeword of `mode`.
QuantizedTensor pack_tensor(std::span<const double> values, std::size_t rows, std::size_t cols,
                            double volume, QuantMode mode);
std::vector<double> unpack_tensor(const QuantizedTensor& t, QuantMode mode);

/// Quantizes and packs every tensor of `net` (biases as 1 x n tensors).
QuantizedModel pack_network(const Network& net, std::span<const LayerVolume> volumes, QuantMode mode);

std::vector<std::uint8_t> serialize_quantized(const QuantizedModel& model);
/// Throws IntegrityError on bad magic, truncation or checksum mismatch and
/// VersionError on an unknown version.
QuantizedModel deserialize_quantized(std::span<const std::uint8_t> bytes);

void save_quantized(const std::filesystem::path& path, const QuantizedModel& model);
QuantizedModel load_quantized(const std::filesystem::path& path);

}  // namespace volkit

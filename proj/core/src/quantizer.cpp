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

#include "volkit/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "byte_io.hpp"
#include "volkit/errors.hpp"

namespace volkit {

namespace {
constexpr std::uint8_t kMagic[4] = {'V', 'Q', 'N', 'T'};

void check_volume(double volume) {
  if (!(volume > 0.0) || !std::isfinite(volume)) {
    throw DomainError("quantize: V must be finite and positive");
  }
}
}  // namespace

std::string_view to_string(QuantMode m) noexcept { return m == QuantMode::binary ? "binary" : "ternary"; }

QuantMode parse_quant_mode(std::string_view s) {
  if (s == "binary") return QuantMode::binary;
  if (s == "ternary") return QuantMode::ternary;
  throw ConfigError("unknown quantization mode '" + std::string(s) + "'");
}

double quantize_value(double w, double volume, QuantMode mode) noexcept {
  if (mode == QuantMode::binary) return w >= 0.0 ? volume : -volume;
  const double half = volume / 2.0;
  if (w > half) return volume;
  if (w < -half) return -volume;
  return 0.0;
}

void quantize_inplace(std::span<double> values, double volume, QuantMode mode) {
  check_volume(volume);
  for (double& w : values) w = quantize_value(w, volume, mode);
}

DenseMatrix quantize(const DenseMatrix& weights, double volume, QuantMode mode) {
  DenseMatrix out = weights;
  quantize_inplace(out.data(), volume, mode);
  return out;
}

void quantize_network(Network& net, std::span<const LayerVolume> volumes, QuantMode mode) {
  auto params = net.parameters();
  if (volumes.size() != params.size()) throw ShapeError("quantize_network: volumes do not mirror the network");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!(volumes[i].volume > 0.0) || !std::isfinite(volumes[i].volume)) {
      throw ConfigError("quantize_network: quantization needs a finite positive volume per layer");
    }
    quantize_inplace(params[i].values, volumes[i].volume, mode);
  }
}

std::vector<WeightHistogram> weight_histogram(const Network& net, std::span<const LayerVolume> volumes,
                                              std::size_t bins, double delta) {
  if (bins < 3) throw DomainError("weight_histogram: need at least 3 bins");
  if (!(delta >= 0.0)) throw DomainError("weight_histogram: delta must be >= 0");
  const auto params = net.parameters();
  if (volumes.size() != params.size()) throw ShapeError("weight_histogram: volumes do not mirror the network");

  std::vector<WeightHistogram> out;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto values = params[i];
    WeightHistogram h;
    h.layer = volumes[i].layer;
    h.is_bias = volumes[i].is_bias;
    h.volume = volumes[i].volume;
    const double range = std::max(max_abs(values), 1e-300);
    h.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b)
      h.edges[b] = -range + 2.0 * range * static_cast<double>(b) / static_cast<double>(bins);
    h.counts.assign(bins, 0);
    std::size_t near = 0;
    for (double w : values) {
      auto b = static_cast<std::size_t>((w + range) / (2.0 * range) * static_cast<double>(bins));
      h.counts[std::min(b, bins - 1)] += 1;
      if (std::abs(std::abs(w) - h.volume) <= delta * h.volume) ++near;
    }
    h.mass_near_walls = values.empty() ? 0.0 : static_cast<double>(near) / static_cast<double>(values.size());
    out.push_back(std::move(h));
  }
  return out;
}

double weight_mass_near_walls(const Network& net, std::span<const LayerVolume> volumes, double delta) {
  const auto params = net.parameters();
  if (volumes.size() != params.size()) throw ShapeError("weight_mass_near_walls: volumes do not mirror the network");
  std::size_t near = 0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (volumes[i].is_bias) continue;
    const double v = volumes[i].volume;
    for (double w : params[i]) {
      if (std::abs(std::abs(w) - v) <= delta * v) ++near;
      ++total;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(near) / static_cast<double>(total);
}

QuantizedTensor pack_tensor(std::span<const double> values, std::size_t rows, std::size_t cols,
                            double volume, QuantMode mode) {
  check_volume(volume);
  if (values.size() != rows * cols) throw ShapeError("pack_tensor: value count does not match shape");
  const std::size_t bits = bits_per_weight(mode);
  QuantizedTensor t{rows, cols, volume, std::vector<std::uint8_t>((values.size() * bits + 7) / 8, 0)};
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double w = values[k];
    std::uint8_t code;
    if (w == volume) {
      code = 1;
    } else if (w == -volume) {
      code = mode == QuantMode::binary ? 0 : 2;
    } else if (w == 0.0 && mode == QuantMode::ternary) {
      code = 0;
    } else {
      throw DomainError("pack_tensor: value is not a " + std::string(to_string(mode)) + " codeword");
    }
    const std::size_t bit = k * bits;
    t.packed[bit / 8] |= static_cast<std::uint8_t>(code << (bit % 8));
  }
  return t;
}

std::vector<double> unpack_tensor(const QuantizedTensor& t, QuantMode mode) {
  const std::size_t bits = bits_per_weight(mode);
  if (t.packed.size() != (t.count() * bits + 7) / 8) throw IntegrityError("unpack_tensor: packed size mismatch");
  std::vector<double> out(t.count());
  const std::uint8_t mask = mode == QuantMode::binary ? 0x1 : 0x3;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const std::size_t bit = k * bits;
    const std::uint8_t code = (t.packed[bit / 8] >> (bit % 8)) & mask;
    if (mode == QuantMode::binary) {
      out[k] = code ? t.volume : -t.volume;
    } else {
      switch (code) {
        case 0: out[k] = 0.0; break;
        case 1: out[k] = t.volume; break;
        case 2: out[k] = -t.volume; break;
        default: throw IntegrityError("unpack_tensor: invalid ternary code");
      }
    }
  }
  return out;
}

QuantizedModel pack_network(const Network& net, std::span<const LayerVolume> volumes, QuantMode mode) {
  Network q = net;
  quantize_network(q, volumes, mode);
  QuantizedModel model{mode, {}};
  const auto params = q.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Layer& l = q.layers()[volumes[i].layer];
    const std::size_t rows = volumes[i].is_bias ? 1 : l.weight.rows();
    const std::size_t cols = volumes[i].is_bias ? l.bias.size() : l.weight.cols();
    model.tensors.push_back(pack_tensor(params[i].values, rows, cols, volumes[i].volume, mode));
  }
  return model;
}

std::vector<std::uint8_t> serialize_quantized(const QuantizedModel& model) {
  detail::ByteWriter w;
  w.bytes(kMagic);
  w.u8(kQuantFormatVersion);
  w.u8(static_cast<std::uint8_t>(model.mode));
  w.u32(static_cast<std::uint32_t>(model.tensors.size()));
  for (const auto& t : model.tensors) {
    w.u32(static_cast<std::uint32_t>(t.rows));
    w.u32(static_cast<std::uint32_t>(t.cols));
    w.f64(t.volume);
    w.bytes(t.packed);
  }
  const std::uint32_t crc = detail::crc32(w.buffer());
  w.u32(crc);
  return std::move(w.buffer());
}

QuantizedModel deserialize_quantized(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 + 1 + 1 + 4 + 4 || !std::equal(kMagic, kMagic + 4, bytes.begin())) {
    throw IntegrityError("not a quantized model file (bad magic or too short)");
  }
  if (bytes[4] != kQuantFormatVersion) {
    throw VersionError("quantized model version " + std::to_string(bytes[4]) + " is not supported (expected " +
                       std::to_string(kQuantFormatVersion) + ")");
  }
  const auto body = bytes.first(bytes.size() - 4);
  detail::ByteReader tail(bytes.last(4));
  if (detail::crc32(body) != tail.u32()) throw IntegrityError("quantized model checksum mismatch");

  detail::ByteReader r(body);
  r.take(5);
  QuantizedModel model;
  const std::uint8_t mode = r.u8();
  if (mode != static_cast<std::uint8_t>(QuantMode::binary) && mode != static_cast<std::uint8_t>(QuantMode::ternary)) {
    throw IntegrityError("unknown quantization mode code");
  }
  model.mode = static_cast<QuantMode>(mode);
  const std::uint32_t count = r.u32();
  for (std::uint32_t i = 0; i < count; ++i) {
    QuantizedTensor t;
    t.rows = r.u32();
    t.cols = r.u32();
    t.volume = r.f64();
    const auto n = (t.count() * bits_per_weight(model.mode) + 7) / 8;
    const auto b = r.take(n);
    t.packed.assign(b.begin(), b.end());
    model.tensors.push_back(std::move(t));
  }
  if (r.remaining() != 0) throw IntegrityError("trailing bytes in quantized model");
  return model;
}

void save_quantized(const std::filesystem::path& path, const QuantizedModel& model) {
  detail::write_file_atomic(path.string(), serialize_quantized(model));
}

QuantizedModel load_quantized(const std::filesystem::path& path) {
  return deserialize_quantized(detail::read_file(path.string()));
}

}  // namespace volkit

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

#include "volkit/checkpoint.hpp"

#include <algorithm>
#include <string>

#include "byte_io.hpp"
#include "volkit/errors.hpp"

namespace volkit {

namespace {

constexpr std::uint8_t kMagic[8] = {'V', 'O', 'L', 'K', 'C', 'K', 'P', 'T'};

template <typename Enum>
Enum read_enum(detail::ByteReader& r, std::uint8_t max_value) {
  const std::uint8_t v = r.u8();
  if (v > max_value) throw IntegrityError("checkpoint: enum value out of range");
  return static_cast<Enum>(v);
}

void write_config(detail::ByteWriter& w, const TrainConfig& c) {
  w.u64(c.model.input_dim);
  w.u64(c.model.hidden.size());
  for (std::size_t h : c.model.hidden) w.u64(h);
  w.u64(c.model.output_dim);
  w.u8(static_cast<std::uint8_t>(c.model.activation));
  w.u8(static_cast<std::uint8_t>(c.model.loss));
  w.u8(c.model.bias ? 1 : 0);

  w.u8(static_cast<std::uint8_t>(c.optimizer.kind));
  w.f64(c.optimizer.lr);
  w.f64(c.optimizer.mu);
  w.f64(c.optimizer.nu);
  w.f64(c.optimizer.eps);
  w.u8(c.optimizer.bias_correction ? 1 : 0);

  w.f64(c.volumization.v);
  w.f64(c.volumization.alpha);
  w.u8(static_cast<std::uint8_t>(c.volumization.fan_mode));
  w.u8(static_cast<std::uint8_t>(c.volumization.overshoot));

  w.u64(c.epochs);
  w.u64(c.batch_size);
  w.u8(c.quantization ? 1 : 0);
  if (c.quantization) {
    w.u8(static_cast<std::uint8_t>(c.quantization->mode));
    w.u64(c.quantization->period_epochs);
  }
}

TrainConfig read_config(detail::ByteReader& r) {
  TrainConfig c;
  c.model.input_dim = r.u64();
  const std::uint64_t n_hidden = r.u64();
  if (n_hidden > r.remaining() / 8) throw IntegrityError("checkpoint: bad hidden layer count");
  c.model.hidden.resize(n_hidden);
  for (auto& h : c.model.hidden) h = r.u64();
  c.model.output_dim = r.u64();
  c.model.activation = read_enum<Activation>(r, 2);
  c.model.loss = read_enum<Loss>(r, 1);
  c.model.bias = r.u8() != 0;

  c.optimizer.kind = read_enum<OptimizerKind>(r, 2);
  c.optimizer.lr = r.f64();
  c.optimizer.mu = r.f64();
  c.optimizer.nu = r.f64();
  c.optimizer.eps = r.f64();
  c.optimizer.bias_correction = r.u8() != 0;

  c.volumization.v = r.f64();
  c.volumization.alpha = r.f64();
  c.volumization.fan_mode = read_enum<FanMode>(r, 1);
  c.volumization.overshoot = read_enum<OvershootPolicy>(r, 1);

  c.epochs = r.u64();
  c.batch_size = r.u64();
  if (r.u8() != 0) {
    QuantizationScheme q;
    const std::uint8_t mode = r.u8();
    if (mode != 1 && mode != 2) throw IntegrityError("checkpoint: bad quantization mode");
    q.mode = static_cast<QuantMode>(mode);
    q.period_epochs = r.u64();
    c.quantization = q;
  }
  return c;
}

void write_network(detail::ByteWriter& w, const Network& net) {
  w.u64(net.depth());
  for (const Layer& l : net.layers()) {
    w.u64(l.spec.in_dim);
    w.u64(l.spec.out_dim);
    w.u8(static_cast<std::uint8_t>(l.spec.activation));
    w.u8(l.spec.has_bias ? 1 : 0);
    w.u8(l.init_scale ? 1 : 0);
    if (l.init_scale) {
      w.f64(l.init_scale->a);
      w.u8(static_cast<std::uint8_t>(l.init_scale->fan_mode));
    }
    w.f64s(l.weight.data());
    w.f64s(l.bias);
  }
}

Network read_network(detail::ByteReader& r) {
  const std::uint64_t depth = r.u64();
  if (depth == 0 || depth > r.remaining()) throw IntegrityError("checkpoint: bad layer count");
  std::vector<Layer> layers;
  for (std::uint64_t i = 0; i < depth; ++i) {
    LayerSpec spec;
    spec.in_dim = r.u64();
    spec.out_dim = r.u64();
    spec.activation = read_enum<Activation>(r, 2);
    spec.has_bias = r.u8() != 0;
    std::optional<InitScale> init;
    if (r.u8() != 0) {
      InitScale s;
      s.a = r.f64();
      s.fan_mode = read_enum<FanMode>(r, 1);
      init = s;
    }
    auto weights = r.f64s();
    auto bias = r.f64s();
    if (spec.in_dim == 0 || spec.out_dim == 0 || weights.size() != spec.in_dim * spec.out_dim) {
      throw IntegrityError("checkpoint: weight payload does not match layer shape");
    }
    layers.push_back(Layer{spec, DenseMatrix(spec.out_dim, spec.in_dim, std::move(weights)), std::move(bias), init});
  }
  try {
    return Network(std::move(layers));
  } catch (const ShapeError& e) {
    throw IntegrityError(std::string("checkpoint: inconsistent network: ") + e.what());
  }
}

}  // namespace

std::vector<std::uint8_t> serialize_checkpoint(const TrainerState& state) {
  detail::ByteWriter p;
  write_config(p, state.config);
  write_network(p, state.network);

  p.u64(state.optimizer.t);
  p.u64(state.optimizer.m.size());
  for (std::size_t i = 0; i < state.optimizer.m.size(); ++i) {
    p.f64s(state.optimizer.m[i]);
    p.f64s(state.optimizer.n[i]);
  }

  p.u64(state.epoch);
  p.u64(state.rng.seed());
  p.u64(state.rng.position());

  p.u64(state.trajectory.size());
  for (const auto& e : state.trajectory.epochs()) {
    p.f64(e.train_loss);
    p.f64(e.train_acc);
    p.f64(e.test_loss);
    p.f64(e.test_acc);
  }

  detail::ByteWriter out;
  out.bytes(kMagic);
  out.u32(kCheckpointVersion);
  out.u64(p.buffer().size());
  out.bytes(p.buffer());
  out.u32(detail::crc32(p.buffer()));
  return std::move(out.buffer());
}

TrainerState deserialize_checkpoint(std::span<const std::uint8_t> bytes) {
  detail::ByteReader head(bytes);
  const auto magic = head.take(8);
  if (!std::equal(magic.begin(), magic.end(), kMagic)) throw IntegrityError("not a checkpoint file (bad magic)");
  const std::uint32_t version = head.u32();
  if (version != kCheckpointVersion) {
    throw VersionError("checkpoint format version " + std::to_string(version) + " is not supported (expected " +
                       std::to_string(kCheckpointVersion) + ")");
  }
  const std::uint64_t len = head.u64();
  if (len > head.remaining() || head.remaining() - len != 4) {
    throw IntegrityError("checkpoint truncated or has trailing bytes");
  }
  const auto payload = head.take(len);
  if (detail::crc32(payload) != head.u32()) throw IntegrityError("checkpoint payload checksum mismatch");

  detail::ByteReader r(payload);
  TrainConfig config = read_config(r);
  Network net = read_network(r);

  OptimizerState opt;
  opt.t = r.u64();
  const std::uint64_t k = r.u64();
  if (k != net.tensor_count()) throw IntegrityError("checkpoint: optimizer state does not mirror the network");
  for (std::uint64_t i = 0; i < k; ++i) {
    opt.m.push_back(r.f64s());
    opt.n.push_back(r.f64s());
  }

  const std::uint64_t epoch = r.u64();
  const std::uint64_t seed = r.u64();
  const std::uint64_t position = r.u64();

  MetricTrajectory traj;
  const std::uint64_t n_epochs = r.u64();
  if (n_epochs > r.remaining() / 32) throw IntegrityError("checkpoint: bad trajectory length");
  for (std::uint64_t i = 0; i < n_epochs; ++i) {
    EpochMetrics e;
    e.train_loss = r.f64();
    e.train_acc = r.f64();
    e.test_loss = r.f64();
    e.test_acc = r.f64();
    traj.push(e);
  }
  if (r.remaining() != 0) throw IntegrityError("checkpoint payload has trailing bytes");

  return TrainerState{std::move(config), std::move(net), std::move(opt), epoch, SeededRng(seed, position),
                      std::move(traj)};
}

void save_checkpoint(const std::filesystem::path& path, const TrainerState& state) {
  detail::write_file_atomic(path.string(), serialize_checkpoint(state));
}

TrainerState load_checkpoint(const std::filesystem::path& path) {
  return deserialize_checkpoint(detail::read_file(path.string()));
}

}  // namespace volkit

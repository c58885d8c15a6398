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

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "volkit/training.hpp"

namespace volkit {

// Checkpoint file:
//   8 bytes  magic "VOLKCKPT"
//   u32      format version
//   u64      payload length
//   payload  model spec, optimizer spec, volumization config, schedule,
//            per-layer shapes + f64 weights/biases + init scale, optimizer
//            moments and step counter, epoch, RNG (seed, position), metric
//            trajectory
//   u32      CRC-32 of the payload
// Integers and IEEE-754 doubles are little-endian, so the round trip is
// bitwise.
inline constexpr std::uint32_t kCheckpointVersion = 1;

std::vector<std::uint8_t> serialize_checkpoint(const TrainerState& state);

/// Throws IntegrityError on bad magic, truncation or checksum mismatch and
/// VersionError when the version differs from kCheckpointVersion.
TrainerState deserialize_checkpoint(std::span<const std::uint8_t> bytes);

/// Written to a temporary file and renamed into place.
void save_checkpoint(const std::filesystem::path& path, const TrainerState& state);
TrainerState load_checkpoint(const std::filesystem::path& path);

}  // namespace volkit

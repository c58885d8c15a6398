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
#include "volkit/rng.hpp"

namespace volkit {

struct Dataset {
  DenseMatrix x_train;
  std::vector<int> y_train;
  DenseMatrix x_test;
  std::vector<int> y_test;
  std::size_t n_classes = 0;
  /// Training indices whose labels were reassigned, ascending.
  std::vector<std::size_t> corrupted;
  /// Original labels of the corrupted indices, same order.
  std::vector<int> original_labels;
};

struct BlobSpec {
  std::size_t n_classes = 4;
  std::size_t n_per_class = 250;
  std::size_t dim = 2;
  double spread = 1.0;
};

/// Gaussian clusters (isotropic std `spread`) around class centers drawn
/// uniformly from [-1, 1]^dim. Samples are shuffled and the first 80%
/// (rounded down) form the training split.
/// Throws DomainError on n_classes < 2, n_per_class == 0, dim == 0 or
/// spread <= 0.
Dataset gen_blobs(SeededRng& rng, const BlobSpec& spec);

/// Reassigns exactly floor(ratio * n_train) distinct training labels to a
/// different class chosen uniformly; test labels are never touched.
/// Throws DomainError unless 0 <= ratio < 1.
Dataset inject_label_noise(Dataset data, double ratio, SeededRng& rng);

/// In-place Fisher-Yates shuffle of 0..n-1.
std::vector<std::size_t> random_permutation(SeededRng& rng, std::size_t n);

/// FNV-1a over the test labels; used to audit that noise injection leaves
/// them unchanged.
std::uint64_t label_checksum(const std::vector<int>& labels);

}  // namespace volkit

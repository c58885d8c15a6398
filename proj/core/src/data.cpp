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

#include "volkit/data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "volkit/errors.hpp"

namespace volkit {

std::vector<std::size_t> random_permutation(SeededRng& rng, std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = rng.next_below(i);
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

Dataset gen_blobs(SeededRng& rng, const BlobSpec& spec) {
  if (spec.n_classes < 2) throw DomainError("gen_blobs: need at least 2 classes");
  if (spec.n_per_class == 0 || spec.dim == 0) throw DomainError("gen_blobs: empty dataset");
  if (!(spec.spread > 0.0)) throw DomainError("gen_blobs: spread must be positive");

  DenseMatrix centers(spec.n_classes, spec.dim);
  for (double& c : centers.data()) c = -1.0 + 2.0 * rng.next_unit();

  const std::size_t total = spec.n_classes * spec.n_per_class;
  DenseMatrix x(total, spec.dim);
  std::vector<int> y(total);
  for (std::size_t k = 0; k < spec.n_classes; ++k) {
    for (std::size_t j = 0; j < spec.n_per_class; ++j) {
      const std::size_t r = k * spec.n_per_class + j;
      for (std::size_t c = 0; c < spec.dim; ++c) x(r, c) = centers(k, c) + spec.spread * rng.next_normal();
      y[r] = static_cast<int>(k);
    }
  }

  const auto perm = random_permutation(rng, total);
  const std::size_t n_train = std::max<std::size_t>(1, total * 4 / 5);
  const std::size_t n_test = total - n_train;
  if (n_test == 0) throw DomainError("gen_blobs: dataset too small for a test split");

  Dataset d{DenseMatrix(n_train, spec.dim), {}, DenseMatrix(n_test, spec.dim), {}, spec.n_classes, {}, {}};
  for (std::size_t i = 0; i < total; ++i) {
    const std::size_t src = perm[i];
    const bool train = i < n_train;
    auto dst = train ? d.x_train.row(i) : d.x_test.row(i - n_train);
    std::copy(x.row(src).begin(), x.row(src).end(), dst.begin());
    (train ? d.y_train : d.y_test).push_back(y[src]);
  }
  return d;
}

Dataset inject_label_noise(Dataset data, double ratio, SeededRng& rng) {
  if (!(ratio >= 0.0 && ratio < 1.0)) throw DomainError("inject_label_noise: ratio must lie in [0, 1)");
  const std::size_t n = data.y_train.size();
  const auto k = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n)));
  if (k == 0) return data;
  if (data.n_classes < 2) throw DomainError("inject_label_noise: need at least 2 classes");

  auto perm = random_permutation(rng, n);
  std::vector<std::size_t> chosen(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(chosen.begin(), chosen.end());
  for (std::size_t idx : chosen) {
    const int orig = data.y_train[idx];
    // Uniform over the other n_classes - 1 labels.
    auto shift = static_cast<int>(1 + rng.next_below(data.n_classes - 1));
    data.y_train[idx] = (orig + shift) % static_cast<int>(data.n_classes);
    data.corrupted.push_back(idx);
    data.original_labels.push_back(orig);
  }
  return data;
}

std::uint64_t label_checksum(const std::vector<int>& labels) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (int v : labels) {
    auto u = static_cast<std::uint32_t>(v);
    for (int b = 0; b < 4; ++b) {
      h ^= (u >> (8 * b)) & 0xffu;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

}  // namespace volkit

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

#include "volkit/metrics.hpp"

#include <algorithm>

#include "volkit/errors.hpp"

namespace volkit {

double MetricTrajectory::best() const {
  if (epochs_.empty()) throw DomainError("best() of an empty trajectory");
  double b = epochs_.front().test_acc;
  for (const auto& e : epochs_) b = std::max(b, e.test_acc);
  return b;
}

double MetricTrajectory::last() const {
  if (epochs_.empty()) throw DomainError("last() of an empty trajectory");
  const std::size_t window = std::min(kLastWindow, epochs_.size());
  double s = 0.0;
  double hi = 0.0;
  for (std::size_t i = epochs_.size() - window; i < epochs_.size(); ++i) {
    s += epochs_[i].test_acc;
    hi = std::max(hi, epochs_[i].test_acc);
  }
  // Rounding in the sum can push the mean of equal values above them.
  return std::min(s / static_cast<double>(window), hi);
}

}  // namespace volkit

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
#include <vector>

namespace volkit {

struct EpochMetrics {
  double train_loss = 0.0;
  double train_acc = 0.0;
  double test_loss = 0.0;
  double test_acc = 0.0;

  friend bool operator==(const EpochMetrics&, const EpochMetrics&) = default;
};

/// Per-epoch metrics with the Best / Last / Gap summaries:
///   Best = max test accuracy over epochs
///   Last = mean test accuracy over the final 10 epochs (all epochs when
///          fewer than 10 were run; see last_is_full)
///   Gap  = Best - Last
class MetricTrajectory {
 public:
  static constexpr std::size_t kLastWindow = 10;

  void push(const EpochMetrics& m) { epochs_.push_back(m); }
  const std::vector<EpochMetrics>& epochs() const noexcept { return epochs_; }
  std::size_t size() const noexcept { return epochs_.size(); }
  bool empty() const noexcept { return epochs_.empty(); }

  double best() const;
  double last() const;
  double gap() const { return best() - last(); }
  bool last_is_full() const noexcept { return epochs_.size() >= kLastWindow; }

  friend bool operator==(const MetricTrajectory&, const MetricTrajectory&) = default;

 private:
  std::vector<EpochMetrics> epochs_;
};

}  // namespace volkit

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


#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <ostream>
#include <vector>

#include "oracles.hpp"
#include "volkit/errors.hpp"
#include "volkit/optimizers.hpp"

namespace volkit {

void PrintTo(OptimizerKind k, std::ostream* os) { *os << to_string(k); }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using ScalarOpt = oracle::ScalarOptimizer;

Network scalar_net(double w) {
  return Network({Layer{{1, 1, Activation::identity, false}, DenseMatrix{{w}}, {}, std::nullopt}});
}

// Gradient of l(w) = w^2 / 2 via the network: x = 1, y = 0.
GradientBundle quad_grad(const Network& net) {
  return loss_and_grad(net, DenseMatrix{{1.0}}, DenseMatrix{{0.0}}, Loss::mse);
}

std::vector<LayerVolume> volume_of(double V) { return {LayerVolume{0, false, V}}; }

OptimizerSpec make_spec(OptimizerKind k, double lr, double mu = 0.9) {
  OptimizerSpec s;
  s.kind = k;
  s.lr = lr;
  s.mu = mu;
  return s;
}

TEST(Step, PlainSgd) {
  Network net = scalar_net(1.0);
  OptimizerState st = OptimizerState::zeros_like(net);
  GradientBundle g{0.0, {{2.0}}};
  step(net, g, st, make_spec(OptimizerKind::sgd, 0.1, 0.0), volume_of(kInf), 0.0);
  EXPECT_DOUBLE_EQ(net.layers()[0].weight(0, 0), 0.8);
  EXPECT_EQ(st.t, 1u);
}

TEST(Step, SgdThenClip) {
  Network net = scalar_net(0.5);
  OptimizerState st = OptimizerState::zeros_like(net);
  GradientBundle g{0.0, {{-1.0}}};
  step(net, g, st, make_spec(OptimizerKind::sgd, 1.0, 0.0), volume_of(1.0), 0.0);
  EXPECT_EQ(net.layers()[0].weight(0, 0), 1.0);
  EXPECT_EQ(st.m[0][0], 0.0);
}

TEST(Step, AdamFirstStepHasMagnitudeLr) {
  for (double c : {3.0, -0.01, 250.0}) {
    Network net = scalar_net(0.0);
    OptimizerState st = OptimizerState::zeros_like(net);
    OptimizerSpec s = make_spec(OptimizerKind::adam, 1e-3);
    step(net, GradientBundle{0.0, {{c}}}, st, s, volume_of(kInf), 1.0);
    EXPECT_NEAR(net.layers()[0].weight(0, 0), -1e-3 * c / (std::abs(c) + s.eps), 1e-18);
  }
}

TEST(Step, VolumizedSgdTrajectoryMatchesClippedScalarOracle) {
  Network net = scalar_net(5.0);
  OptimizerState st = OptimizerState::zeros_like(net);
  const OptimizerSpec s = make_spec(OptimizerKind::sgd, 0.05, 0.9);
  double w = 5.0, m = 0.0;
  for (int k = 0; k < 100; ++k) {
    step(net, quad_grad(net), st, s, volume_of(1.0), 0.0);
    m = 0.9 * m + w;
    w = w - 0.05 * m;
    if (std::abs(w) > 1.0) {
      w = std::min(std::max(w, -1.0), 1.0);
      m = 0.0;
    }
    ASSERT_EQ(net.layers()[0].weight(0, 0), w) << k;
    ASSERT_EQ(st.m[0][0], m) << k;
  }
}

class TextbookTrajectory : public ::testing::TestWithParam<OptimizerKind> {};

TEST_P(TextbookTrajectory, IdentitySentinelsReproduceScalarReference) {
  const OptimizerSpec s = make_spec(GetParam(), 0.01);
  for (auto [V, alpha] : {std::pair{kInf, 0.0}, std::pair{0.5, 1.0}}) {
    Network net = scalar_net(2.0);
    OptimizerState st = OptimizerState::zeros_like(net);
    ScalarOpt ref{s};
    double w = 2.0;
    for (int k = 0; k < 1000; ++k) {
      step(net, quad_grad(net), st, s, volume_of(V), alpha);
      w = ref.step(w, w);
      ASSERT_EQ(net.layers()[0].weight(0, 0), w) << k;
    }
  }
}

TEST_P(TextbookTrajectory, ZeroVolumeIsStepThenScale) {
  const OptimizerSpec s = make_spec(GetParam(), 0.01);
  const double alpha = 0.97;
  Network a = scalar_net(2.0), b = scalar_net(2.0);
  OptimizerState sa = OptimizerState::zeros_like(a), sb = OptimizerState::zeros_like(b);
  for (int k = 0; k < 1000; ++k) {
    step(a, quad_grad(a), sa, s, volume_of(0.0), alpha);
    step(b, quad_grad(b), sb, s, volume_of(kInf), 1.0);
    double& wb = b.layer(0).weight(0, 0);
    if (wb != 0.0) {
      wb *= alpha;
      sb.m[0][0] *= alpha;
    }
    ASSERT_EQ(a.layers()[0].weight(0, 0), wb) << k;
    ASSERT_EQ(sa.m[0][0], sb.m[0][0]) << k;
    ASSERT_EQ(sa.n[0][0], sb.n[0][0]) << k;
    ASSERT_GE(sa.n[0][0], 0.0);
  }
}

TEST_P(TextbookTrajectory, ZeroAlphaIsStepThenClip) {
  const OptimizerSpec s = make_spec(GetParam(), 0.2);
  const double V = 0.3;
  Network a = scalar_net(2.0), b = scalar_net(2.0);
  OptimizerState sa = OptimizerState::zeros_like(a), sb = OptimizerState::zeros_like(b);
  for (int k = 0; k < 1000; ++k) {
    // Drive against a shifted target so the wall is hit repeatedly.
    const GradientBundle ga = loss_and_grad(a, DenseMatrix{{1.0}}, DenseMatrix{{1.0}}, Loss::mse);
    const GradientBundle gb = loss_and_grad(b, DenseMatrix{{1.0}}, DenseMatrix{{1.0}}, Loss::mse);
    step(a, ga, sa, s, volume_of(V), 0.0);
    step(b, gb, sb, s, volume_of(kInf), 1.0);
    double& wb = b.layer(0).weight(0, 0);
    if (std::abs(wb) > V) {
      wb = std::min(std::max(wb, -V), V);
      sb.m[0][0] = 0.0;
    }
    ASSERT_EQ(a.layers()[0].weight(0, 0), wb) << k;
    ASSERT_LE(std::abs(wb), V);
  }
}

INSTANTIATE_TEST_SUITE_P(AllKinds, TextbookTrajectory,
                         ::testing::Values(OptimizerKind::sgd, OptimizerKind::adam, OptimizerKind::laprop),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Step, Deterministic) {
  SeededRng r1(3), r2(3);
  const std::vector<LayerSpec> specs{{2, 4, Activation::tanh, true}, {4, 1, Activation::identity, true}};
  Network a = Network::he_uniform(specs, r1), b = Network::he_uniform(specs, r2);
  OptimizerState sa = OptimizerState::zeros_like(a), sb = OptimizerState::zeros_like(b);
  const DenseMatrix x{{0.1, 0.2}, {-0.3, 0.5}}, y{{1.0}, {-1.0}};
  const auto vols = uniform_volumes(a, 0.4);
  for (int k = 0; k < 50; ++k) {
    step(a, loss_and_grad(a, x, y, Loss::mse), sa, OptimizerSpec{}, vols, 0.5);
    step(b, loss_and_grad(b, x, y, Loss::mse), sb, OptimizerSpec{}, vols, 0.5);
  }
  EXPECT_EQ(a, b);
  EXPECT_EQ(sa, sb);
}

TEST(Step, NonFiniteGradientNamesParameter) {
  Network net = scalar_net(1.0);
  OptimizerState st = OptimizerState::zeros_like(net);
  GradientBundle g{0.0, {{std::nan("")}}};
  try {
    step(net, g, st, OptimizerSpec{}, volume_of(kInf), 1.0);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("layer0.weight"), std::string::npos) << e.what();
  }
}

TEST(Step, ShapeMismatch) {
  Network net = scalar_net(1.0);
  OptimizerState st = OptimizerState::zeros_like(net);
  EXPECT_THROW(step(net, GradientBundle{0.0, {{1.0, 2.0}}}, st, OptimizerSpec{}, volume_of(kInf), 1.0),
               ShapeError);
  EXPECT_THROW(step(net, GradientBundle{0.0, {}}, st, OptimizerSpec{}, volume_of(kInf), 1.0), ShapeError);
}

TEST(OptimizerSpec, Validation) {
  OptimizerSpec s;
  EXPECT_NO_THROW(s.validate());
  s.lr = 0.0;
  EXPECT_THROW(s.validate(), DomainError);
  s = OptimizerSpec{};
  s.mu = 1.0;
  EXPECT_THROW(s.validate(), DomainError);
  s = OptimizerSpec{};
  s.eps = 0.0;
  EXPECT_THROW(s.validate(), DomainError);
  EXPECT_EQ(parse_optimizer_kind("laprop"), OptimizerKind::laprop);
  EXPECT_THROW(parse_optimizer_kind("rmsprop"), ConfigError);
}

}  // namespace
}  // namespace volkit

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
#include <vector>

#include "volkit/errors.hpp"
#include "volkit/rng.hpp"
#include "volkit/volumization.hpp"

namespace volkit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

VolumizedPair one(double w, double m, double V, double alpha,
                  OvershootPolicy p = OvershootPolicy::leave) {
  const std::vector<double> ws{w}, ms{m};
  return volumize_step(ws, ms, V, alpha, p);
}

TEST(VolumizeStep, Clipping) {
  const auto r = one(1.5, 2.0, 1.0, 0.0);
  EXPECT_EQ(r.weights[0], 1.0);
  EXPECT_EQ(r.momentum[0], 0.0);
}

TEST(VolumizeStep, SoftWall) {
  const auto r = one(1.5, 2.0, 1.0, 0.5);
  EXPECT_EQ(r.weights[0], 1.25);
  EXPECT_EQ(r.momentum[0], 1.0);
}

TEST(VolumizeStep, ElasticReflection) {
  const auto r = one(1.5, 2.0, 1.0, -1.0);
  EXPECT_EQ(r.weights[0], 0.5);
  EXPECT_EQ(r.momentum[0], -2.0);
  const auto n = one(-1.5, 2.0, 1.0, -1.0);
  EXPECT_EQ(n.weights[0], -0.5);
}

TEST(VolumizeStep, InsideVolumeUntouched) {
  for (double alpha : {-1.0, -0.3, 0.0, 0.5, 0.99}) {
    const auto r = one(0.3, 0.7, 1.0, alpha);
    EXPECT_EQ(r.weights[0], 0.3);
    EXPECT_EQ(r.momentum[0], 0.7);
  }
  // The wall itself is inside: the condition is strict.
  EXPECT_EQ(one(1.0, 1.0, 1.0, 0.0).momentum[0], 1.0);
}

TEST(VolumizeStep, ZeroVolumeIsWeightDecay) {
  const auto r = one(0.2, 1.0, 0.0, 0.999);
  EXPECT_NEAR(r.weights[0], 0.1998, 1e-16);
}

TEST(VolumizeStep, DomainErrors) {
  EXPECT_THROW(one(1.0, 0.0, -1.0, 0.5), DomainError);
  EXPECT_THROW(one(1.0, 0.0, 1.0, 1.5), DomainError);
  EXPECT_THROW(one(1.0, 0.0, 1.0, -1.01), DomainError);
  const std::vector<double> w{1.0, 2.0}, m{0.0};
  EXPECT_THROW(volumize_step(w, m, 1.0, 0.0), ShapeError);
}

TEST(VolumizeInplace, EmptyMomentumAllowed) {
  std::vector<double> w{2.0, -0.5, -3.0};
  EXPECT_EQ(volumize_inplace(w, {}, 1.0, 0.0), 2u);
  EXPECT_EQ(w, (std::vector<double>{1.0, -0.5, -1.0}));
}

TEST(VolumizeInplace, ClampPolicyEnforcesBound) {
  std::vector<double> w{5.0};
  std::vector<double> m{1.0};
  volumize_inplace(w, m, 1.0, -1.0, OvershootPolicy::leave);
  EXPECT_EQ(w[0], -3.0);
  std::vector<double> w2{5.0}, m2{1.0};
  volumize_inplace(w2, m2, 1.0, -1.0, OvershootPolicy::clamp);
  EXPECT_EQ(w2[0], -1.0);
  EXPECT_EQ(m2[0], -1.0);
}

class VolumizeProperties : public ::testing::Test {
 protected:
  std::vector<double> w_hat, m_hat;
  void SetUp() override {
    SeededRng rng(2024);
    w_hat = sample_uniform(rng, -4.0, 4.0, 20000);
    m_hat = sample_uniform(rng, -1.0, 1.0, 20000);
    w_hat.push_back(0.0);
    m_hat.push_back(0.25);
  }
};

TEST_F(VolumizeProperties, ZeroVolumeEqualsScaling) {
  for (double alpha : {0.9, 0.999, 0.5, -0.5}) {
    const auto r = volumize_step(w_hat, m_hat, 0.0, alpha);
    for (std::size_t i = 0; i < w_hat.size(); ++i) {
      if (w_hat[i] == 0.0) continue;
      ASSERT_EQ(r.weights[i], alpha * w_hat[i]);
      ASSERT_EQ(r.momentum[i], alpha * m_hat[i]);
    }
  }
}

TEST_F(VolumizeProperties, ZeroAlphaEqualsClip) {
  for (double V : {0.1, 1.0, 2.5}) {
    const auto r = volumize_step(w_hat, m_hat, V, 0.0);
    for (std::size_t i = 0; i < w_hat.size(); ++i) {
      ASSERT_EQ(r.weights[i], std::min(std::max(w_hat[i], -V), V));
      ASSERT_LE(std::abs(r.weights[i]), V);
    }
  }
}

TEST_F(VolumizeProperties, UnitAlphaIsIdentity) {
  for (double V : {0.0, 0.5, kInf}) {
    const auto r = volumize_step(w_hat, m_hat, V, 1.0);
    ASSERT_EQ(r.weights, w_hat);
    ASSERT_EQ(r.momentum, m_hat);
  }
}

TEST_F(VolumizeProperties, NonNegativeAlphaPreservesSign) {
  for (double alpha : {0.0, 0.3, 0.99}) {
    const auto r = volumize_step(w_hat, m_hat, 1.0, alpha);
    for (std::size_t i = 0; i < w_hat.size(); ++i) {
      if (w_hat[i] != 0.0) ASSERT_EQ(std::signbit(r.weights[i]), std::signbit(w_hat[i]));
    }
  }
}

TEST_F(VolumizeProperties, MonotoneInAlpha) {
  const double V = 1.0;
  for (std::size_t i = 0; i < w_hat.size(); ++i) {
    if (std::abs(w_hat[i]) <= V) continue;
    double prev = -1.0;
    for (double alpha = 0.0; alpha <= 1.0; alpha += 0.125) {
      const double w = std::abs(one(w_hat[i], 0.0, V, alpha).weights[0]);
      ASSERT_GE(w, prev);
      prev = w;
    }
  }
}

TEST_F(VolumizeProperties, ReflectionPreservesDistanceToWall) {
  // For alpha = -1 the point lands as far past the wall as it started, on the
  // other side: |V sgn(w_hat) - w| == |w_hat| - V.
  const double V = 1.0;
  for (double wh : w_hat) {
    if (std::abs(wh) <= V || std::abs(wh) > 3.0 * V) continue;
    const double w = one(wh, 0.0, V, -1.0).weights[0];
    ASSERT_NEAR(std::abs(std::copysign(V, wh) - w), std::abs(wh) - V, 1e-15);
    if (std::abs(wh) <= 2.0 * V) ASSERT_NEAR(std::abs(V - std::abs(w)), std::abs(std::abs(wh) - V), 1e-15);
  }
}

TEST(VolumizationConfig, Validation) {
  EXPECT_NO_THROW(VolumizationConfig::none().validate());
  EXPECT_TRUE(VolumizationConfig::none().is_identity());
  VolumizationConfig c;
  c.v = -1.0;
  EXPECT_THROW(c.validate(), DomainError);
  c.v = 1.0;
  c.alpha = 2.0;
  EXPECT_THROW(c.validate(), DomainError);
  EXPECT_EQ(parse_overshoot_policy("clamp"), OvershootPolicy::clamp);
  EXPECT_THROW(parse_overshoot_policy("wrap"), ConfigError);
}

Network net_with_fans(std::size_t in0, std::size_t out0, std::size_t out1, FanMode mode) {
  SeededRng rng(1);
  const std::vector<LayerSpec> specs{{in0, out0, Activation::relu, true},
                                     {out0, out1, Activation::identity, true}};
  return Network::he_uniform(specs, rng, mode);
}

TEST(DeriveLayerVolumes, ScalesByInitBound) {
  const Network net = net_with_fans(6, 96, 2, FanMode::fan_in);
  VolumizationConfig cfg;
  cfg.v = 1.0;
  auto vols = derive_layer_volumes(net, cfg);
  ASSERT_EQ(vols.size(), 4u);
  EXPECT_DOUBLE_EQ(vols[0].volume, 1.0);
  EXPECT_DOUBLE_EQ(vols[1].volume, 1.0);
  EXPECT_TRUE(vols[1].is_bias);
  EXPECT_DOUBLE_EQ(vols[2].volume, 0.25);
  cfg.v = 0.25;
  vols = derive_layer_volumes(net, cfg);
  EXPECT_DOUBLE_EQ(vols[2].volume, 0.0625);
  cfg.v = 0.0;
  for (const auto& lv : derive_layer_volumes(net, cfg)) EXPECT_EQ(lv.volume, 0.0);
}

TEST(DeriveLayerVolumes, MissingOrMismatchedScale) {
  VolumizationConfig cfg;
  cfg.v = 1.0;
  const Network fan_out = net_with_fans(6, 8, 2, FanMode::fan_out);
  EXPECT_THROW(derive_layer_volumes(fan_out, cfg), ConfigError);
  const Network hand({Layer{{2, 2, Activation::identity, false}, DenseMatrix::identity(2), {}, std::nullopt}});
  EXPECT_THROW(derive_layer_volumes(hand, cfg), ConfigError);
  // Infinite v needs no scale.
  EXPECT_EQ(derive_layer_volumes(hand, VolumizationConfig::none())[0].volume, kInf);
}

TEST(LipschitzVolumes, InverseOfLargerDimension) {
  const Network net = net_with_fans(3, 8, 2, FanMode::fan_in);
  const auto vols = lipschitz_volumes(net);
  EXPECT_DOUBLE_EQ(vols[0].volume, 1.0 / 8.0);
  EXPECT_DOUBLE_EQ(vols[2].volume, 1.0 / 8.0);
}

}  // namespace
}  // namespace volkit

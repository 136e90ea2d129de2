// Copyright 2026 The Zest Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "zest/exact.hpp"
#include "zest/generators.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace zest {
namespace {

double mean_of(const Eigen::MatrixXd& a) { return a.mean(); }

double std_of(const Eigen::MatrixXd& a) {
  const double m = a.mean();
  return std::sqrt((a.array() - m).square().sum() / static_cast<double>(a.size() - 1));
}

TEST(Gwgm, DegenerateParametersAreConstant) {
  const auto m = generate_gwgm(GwgmParams{4, 3, -1.5, 0.0, 0.0, 0.0, 1.0, 7});
  EXPECT_EQ(m.weights(), Eigen::MatrixXd::Constant(3, 4, -1.5));
  EXPECT_EQ(m.visible_bias(), Eigen::VectorXd::Constant(4, -1.5));
  EXPECT_EQ(m.hidden_bias(), Eigen::VectorXd::Constant(3, -1.5));
  const auto z = generate_gwgm(GwgmParams{4, 3, -1.5, 0.0, 0.0, 0.0, 0.0, 7});
  EXPECT_EQ(z.visible_bias(), Eigen::VectorXd::Zero(4));
}

TEST(Gwgm, MomentsFollowParameters) {
  const auto m = generate_gwgm(GwgmParams{200, 300, 2.0, 0.0, 3.0, 0.0, 0.5, 11});
  EXPECT_NEAR(mean_of(m.weights()), 2.0, 0.05);
  EXPECT_NEAR(std_of(m.weights()), 3.0, 0.05);
  Eigen::VectorXd biases(500);
  biases << m.visible_bias(), m.hidden_bias();
  EXPECT_NEAR(mean_of(biases), 1.0, 0.25);
  EXPECT_NEAR(std_of(biases), 1.5, 0.15);
}

TEST(Gwgm, SharedMeanVariesAcrossSeeds) {
  // With sigma_mu > 0 each matrix has its own mean mu_W.
  double lo = 1e9;
  double hi = -1e9;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const double mu = mean_of(generate_gwgm(GwgmParams{10, 10, 0.0, 5.0, 0.1, 0.0, 0.0, s}).weights());
    lo = std::min(lo, mu);
    hi = std::max(hi, mu);
  }
  EXPECT_GT(hi - lo, 5.0);
}

TEST(Gwgm, DeterministicPerSeed) {
  const auto p = hard_gwgm_params(3);
  EXPECT_EQ(generate_gwgm(p), generate_gwgm(p));
  auto q = p;
  q.seed = 4;
  EXPECT_FALSE(generate_gwgm(p) == generate_gwgm(q));
}

TEST(Gwgm, HardFamily) {
  const auto p = hard_gwgm_params(0);
  EXPECT_EQ(p.n_visible, 20);
  EXPECT_EQ(p.n_hidden, 180);
  EXPECT_EQ(p.mu_mu, -10.0);
  EXPECT_EQ(p.sigma_mu, 10.0);
  EXPECT_EQ(p.mu_sigma, 20.0);
  EXPECT_EQ(p.sigma_sigma, 10.0);
  EXPECT_EQ(p.lambda, 0.1);
}

TEST(Gwgm, Validation) {
  EXPECT_THROW(generate_gwgm(GwgmParams{0, 3, 0, 0, 0, 0, 0, 0}), Error);
  EXPECT_THROW(generate_gwgm(GwgmParams{2, 3, 0, -1, 0, 0, 0, 0}), Error);
  EXPECT_THROW(generate_gwgm(GwgmParams{2, 3, 0, 0, 0, 0, -0.1, 0}), Error);
}

TEST(Bms, BlockStructure) {
  BmsParams p;
  p.seed = 5;
  p.blocks = {GwgmParams{3, 4, 1, 1, 1, 1, 0.5, 0}, GwgmParams{5, 2, -1, 1, 2, 1, 0.5, 0}};
  const auto inst = generate_bms(p);
  ASSERT_EQ(inst.blocks.size(), 2u);
  EXPECT_EQ(inst.model.n_visible(), 8);
  EXPECT_EQ(inst.model.n_hidden(), 6);
  auto b0 = p.blocks[0];
  b0.seed = derive_seed(5, 0);
  EXPECT_EQ(inst.blocks[0], generate_gwgm(b0));
  const auto& w = inst.model.weights();
  EXPECT_EQ(w.block(0, 3, 4, 5), Eigen::MatrixXd::Zero(4, 5));
  EXPECT_EQ(w.block(4, 0, 2, 3), Eigen::MatrixXd::Zero(2, 3));
  EXPECT_EQ(w.block(4, 3, 2, 5), inst.blocks[1].weights());
  EXPECT_NEAR(exact_log_z(inst.model).log_z, exact_log_z_block(inst.blocks),
              1e-12 * std::abs(exact_log_z_block(inst.blocks)));
  EXPECT_THROW(generate_bms(BmsParams{}), Error);
}

}  // namespace
}  // namespace zest

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

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace zest {
namespace {

using testing::random_model;

// Reference value computed once at 40 significant digits by summing all 32
// joint states.
TEST(ExactLogZ, FrozenSmallModel) {
  Eigen::MatrixXd w(2, 3);
  w << 1.0, -2.0, 0.5, 0.25, 3.0, -1.5;
  const RbmModel m(w, Eigen::Vector3d(0.1, -0.2, 0.3), Eigen::Vector2d(-0.4, 0.6));
  const double frozen = 4.992514442506797691977;
  EXPECT_NEAR(exact_log_z(m).log_z, frozen, 1e-13);
  EXPECT_NEAR(exact_log_z_joint(m), frozen, 1e-13);
  EXPECT_NEAR(exact_log_z(transpose(m)).log_z, frozen, 1e-13);
}

TEST(ExactLogZ, ZeroModel) {
  for (auto [nv, nh] : {std::pair{1, 1}, {3, 5}, {10, 2}}) {
    EXPECT_NEAR(exact_log_z(RbmModel::zero(nv, nh)).log_z, (nv + nh) * std::log(2.0), 1e-12);
  }
}

TEST(ExactLogZ, FactorizedModel) {
  const auto r = random_model(7, 5, 3);
  const RbmModel m(Eigen::MatrixXd::Zero(5, 7), r.visible_bias(), r.hidden_bias());
  double expected = 0.0;
  for (Eigen::Index j = 0; j < 7; ++j) expected += std::log1p(std::exp(m.visible_bias()[j]));
  for (Eigen::Index i = 0; i < 5; ++i) expected += std::log1p(std::exp(m.hidden_bias()[i]));
  EXPECT_NEAR(exact_log_z(m).log_z, expected, 1e-12);
}

TEST(ExactLogZ, SingleUnitClosedForm) {
  Eigen::MatrixXd w(1, 1);
  w << 2.0;
  const RbmModel m(w, Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Constant(1, 0.5));
  EXPECT_NEAR(exact_log_z(m).log_z, std::log(1.0 + std::exp(-1.0) + std::exp(0.5) + std::exp(1.5)), 1e-14);
}

class ExactVsJoint : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(ExactVsJoint, AgreesWithBruteForce) {
  const auto [nv, nh] = GetParam();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto m = random_model(nv, nh, 100 + seed, 2.0, 1.0);
    const double joint = exact_log_z_joint(m);
    EXPECT_NEAR(exact_log_z(m).log_z, joint, 1e-10 * std::max(1.0, std::abs(joint)));
  }
}

INSTANTIATE_TEST_SUITE_P(Shapes, ExactVsJoint,
                         ::testing::Values(std::pair{1, 1}, std::pair{2, 3}, std::pair{5, 2}, std::pair{6, 6},
                                           std::pair{9, 4}, std::pair{4, 11}));

TEST(ExactLogZ, EnumeratesSmallerLayer) {
  const auto wide = random_model(12, 3, 1);
  const auto r = exact_log_z(wide);
  EXPECT_EQ(r.enumerated_layer, Layer::Hidden);
  EXPECT_EQ(r.states_visited, 8u);
  const auto narrow = exact_log_z(transpose(wide));
  EXPECT_EQ(narrow.enumerated_layer, Layer::Visible);
  EXPECT_NEAR(r.log_z, narrow.log_z, 1e-12);
}

TEST(ExactLogZ, IndependentOfChunkingAndWorkers) {
  const auto m = random_model(16, 40, 9, 0.3, 0.3);
  ExactOptions base;
  base.workers = 1;
  const double ref = exact_log_z(m, base).log_z;
  for (int chunk : {0, 4, 10, 16}) {
    for (unsigned w : {1u, 3u}) {
      ExactOptions o;
      o.chunk_bits = chunk;
      o.workers = w;
      EXPECT_NEAR(exact_log_z(m, o).log_z, ref, 1e-12 * std::abs(ref));
    }
  }
  ExactOptions o;
  o.workers = 4;
  EXPECT_EQ(exact_log_z(m, o).log_z, ref);
}

TEST(ExactLogZ, BudgetIsEnforced) {
  const auto m = RbmModel::zero(30, 31);
  try {
    exact_log_z(m, 20);
    FAIL() << "expected EnumerationBudgetError";
  } catch (const EnumerationBudgetError& e) {
    EXPECT_EQ(e.required_bits(), 30);
  }
  EXPECT_THROW(exact_log_z_joint(RbmModel::zero(12, 12)), EnumerationBudgetError);
}

TEST(ExactLogZ, BlockDiagonalAdditivity) {
  const std::vector<RbmModel> blocks{random_model(3, 4, 1), random_model(5, 2, 2), random_model(2, 2, 3)};
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(8, 10);
  Eigen::VectorXd b(10);
  Eigen::VectorXd c(8);
  Eigen::Index r0 = 0;
  Eigen::Index c0 = 0;
  for (const auto& blk : blocks) {
    w.block(r0, c0, blk.n_hidden(), blk.n_visible()) = blk.weights();
    b.segment(c0, blk.n_visible()) = blk.visible_bias();
    c.segment(r0, blk.n_hidden()) = blk.hidden_bias();
    r0 += blk.n_hidden();
    c0 += blk.n_visible();
  }
  const RbmModel full(w, b, c);
  const double sum = exact_log_z_block(blocks);
  EXPECT_NEAR(exact_log_z(full).log_z, sum, 1e-11);
  EXPECT_NEAR(exact_log_z_joint(full, 18), sum, 1e-11);
}

TEST(ExactLogZ, SurvivesLargeMagnitudes) {
  auto m = random_model(10, 12, 5, 50.0, 50.0);
  const double v = exact_log_z(m).log_z;
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_NEAR(v, exact_log_z_joint(m), 1e-10 * std::abs(v));
}

}  // namespace
}  // namespace zest

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


#include "zest/trainer.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace zest {
namespace {

// Noisy copies of two complementary stripes.
BinaryDataset stripes(std::size_t n, std::size_t nf, std::uint64_t seed) {
  BinaryDataset ds(nf);
  Philox4x32 rng(seed);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = ds.add_row();
    const bool which = rng.bernoulli(0.5);
    for (std::size_t j = 0; j < nf; ++j) {
      const bool on = ((j < nf / 2) == which);
      ds.set(row, j, rng.bernoulli(0.1) ? !on : on);
    }
  }
  return ds;
}

TrainConfig small_config() {
  TrainConfig cfg;
  cfg.n_hidden = 4;
  cfg.learning_rate = 0.1;
  cfg.epochs = 20;
  cfg.batch_size = 20;
  cfg.seed = 3;
  cfg.snapshot_epochs = {0, 10, 20};
  return cfg;
}

TEST(Trainer, SnapshotsAndDeterminism) {
  const auto data = stripes(400, 10, 1);
  const auto a = train_cd(data, small_config());
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a[0].epoch, 0);
  EXPECT_EQ(a[2].epoch, 20);
  EXPECT_EQ(a[0].model.visible_bias(), Eigen::VectorXd::Zero(10));
  EXPECT_LT(rms_weights(a[0].model), 0.02);
  const auto b = train_cd(data, small_config());
  EXPECT_EQ(a[2].model, b[2].model);
  auto cfg = small_config();
  cfg.seed = 4;
  EXPECT_FALSE(train_cd(data, cfg)[2].model == a[2].model);
}

TEST(Trainer, LikelihoodImproves) {
  const auto data = stripes(400, 10, 2);
  const auto snaps = train_cd(data, small_config());
  const double ll0 = exact_log_likelihood(snaps[0].model, data);
  const double ll10 = exact_log_likelihood(snaps[1].model, data);
  const double ll20 = exact_log_likelihood(snaps[2].model, data);
  EXPECT_NEAR(ll0, -10 * std::log(2.0), 0.05);
  EXPECT_GT(ll10, ll0 + 1.0);
  EXPECT_GT(ll20, ll10);
  EXPECT_GT(rms_weights(snaps[2].model), rms_weights(snaps[0].model));
}

TEST(Trainer, Validation) {
  const auto data = stripes(10, 4, 3);
  auto cfg = small_config();
  cfg.snapshot_epochs = {21};
  EXPECT_THROW(train_cd(data, cfg), Error);
  cfg = small_config();
  cfg.batch_size = 0;
  EXPECT_THROW(train_cd(data, cfg), Error);
  EXPECT_THROW(train_cd(BinaryDataset(4), small_config()), Error);
}

TEST(LogLikelihood, MatchesEnumeratedMarginal) {
  const auto m = testing::random_model(5, 3, 4);
  const auto p = testing::visible_distribution(m);
  BinaryDataset data(5);
  double expected = 0.0;
  for (std::uint64_t x : {0ull, 7ull, 19ull, 31ull}) {
    data.add_row(BinaryState::from_index(x, 5).vector());
    expected += std::log(p[x]);
  }
  EXPECT_NEAR(exact_log_likelihood(m, data), expected / 4.0, 1e-12);
}

TEST(Rms, Definition) {
  Eigen::MatrixXd w(2, 2);
  w << 1, -1, 3, 3;
  EXPECT_DOUBLE_EQ(rms_weights(RbmModel(w, Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero())), std::sqrt(5.0));
}

}  // namespace
}  // namespace zest

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

#include "zest/math.hpp"
#include "zest/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace zest {
namespace {

TEST(Softplus, MatchesDefinitionAndSurvivesOverflow) {
  for (double z : {-5.0, -0.3, 0.0, 0.7, 4.0}) {
    EXPECT_NEAR(softplus(z), std::log(1.0 + std::exp(z)), 1e-14);
  }
  EXPECT_DOUBLE_EQ(softplus(1000.0), 1000.0);
  EXPECT_EQ(softplus(-1000.0), 0.0);
  EXPECT_TRUE(std::isfinite(softplus(1e5)));
  Eigen::ArrayXd z(4);
  z << -1000.0, -2.0, 3.0, 1000.0;
  EXPECT_NEAR(softplus_sum(z), softplus(-2.0) + softplus(3.0) + 1000.0, 1e-12);
}

TEST(Sigmoid, OpenUnitInterval) {
  Eigen::ArrayXd z(5);
  z << -30.0, -1.0, 0.0, 2.0, 30.0;
  const Eigen::ArrayXd s = sigmoid_array(z);
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    EXPECT_GT(s[i], 0.0);
    EXPECT_LT(s[i], 1.0);
    EXPECT_NEAR(s[i], sigmoid(z[i]), 1e-16);
  }
  EXPECT_EQ(s[2], 0.5);
  EXPECT_GE(s[4], 1.0 - 1e-9);
}

TEST(Logit, InvertsSigmoid) {
  for (double p : {1e-6, 0.05, 0.3, 0.5, 0.95}) {
    EXPECT_NEAR(sigmoid(logit(p)), p, 1e-15);
  }
  EXPECT_EQ(logit(0.5), 0.0);
}

TEST(LogMeanExp, ConstantSamples) {
  const std::vector<double> s{std::log(2.0), std::log(2.0)};
  EXPECT_EQ(log_mean_exp(s), std::log(2.0));
}

TEST(LogMeanExp, LargestSampleDominates) {
  const std::vector<double> s{0.0, 1000.0};
  EXPECT_NEAR(log_mean_exp(s), 1000.0 + std::log(0.5 * (1.0 + std::exp(-1000.0))), 1e-12);
  EXPECT_NEAR(log_mean_exp(s), 1000.0 - std::log(2.0), 1e-12);
}

TEST(LogMeanExp, JensenBound) {
  Philox4x32 rng(77);
  std::normal_distribution<double> n01(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> s(1 + trial);
    double mean = 0.0;
    for (double& v : s) {
      v = 10.0 * n01(rng);
      mean += v;
    }
    mean /= static_cast<double>(s.size());
    EXPECT_GE(log_mean_exp(s), mean - 1e-12);
  }
}

// Monte Carlo oracle: E[exp(Z)] = exp(1/2) for Z ~ N(0,1).
TEST(LogMeanExp, LogNormalMean) {
  Philox4x32 rng(2024);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::vector<double> s(10000);
  for (double& v : s) v = n01(rng);
  EXPECT_NEAR(log_mean_exp(s), 0.5, 0.05);
}

TEST(LogMeanExp, RejectsBadInput) {
  EXPECT_THROW(log_mean_exp(std::vector<double>{}), Error);
  EXPECT_THROW(log_mean_exp(std::vector<double>{1.0, std::numeric_limits<double>::quiet_NaN()}), Error);
  EXPECT_THROW(log_mean_exp(std::vector<double>{std::numeric_limits<double>::infinity()}), Error);
}

TEST(LogSumExp, MergeMatchesSequential) {
  Philox4x32 rng(3);
  std::vector<double> v(1000);
  for (double& x : v) x = 800.0 * rng.uniform() - 400.0;
  LogSumExp all;
  for (double x : v) all.add(x);
  LogSumExp left, right;
  for (std::size_t i = 0; i < v.size(); ++i) (i < 333 ? left : right).add(v[i]);
  left.merge(right);
  EXPECT_NEAR(left.value(), all.value(), 1e-12 * std::abs(all.value()));
  EXPECT_EQ(LogSumExp{}.value(), -std::numeric_limits<double>::infinity());
}

}  // namespace
}  // namespace zest

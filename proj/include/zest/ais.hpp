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

#ifndef ZEST_AIS_HPP
#define ZEST_AIS_HPP

#include "zest/math.hpp"
#include "zest/parallel.hpp"
#include "zest/rbm.hpp"
#include "zest/rng.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace zest {

/// Visible-only starting distribution p0(x) = 2^{n_h} exp(B.x) / Z0.
///
/// The 2^{n_h} factor is the hidden layer summed out at beta = 0, which is
/// exactly what log_unnorm_marginal_at_beta returns there, so
/// log Z0 = n_h log 2 + sum_j softplus(B_j).
class BaseDistribution {
 public:
  BaseDistribution(Eigen::VectorXd bias, Eigen::Index n_hidden) : bias_(std::move(bias)), n_hidden_(n_hidden) {
    if (bias_.size() < 1 || n_hidden_ < 1) {
      throw DimensionError("BaseDistribution: empty layer");
    }
    if (!bias_.allFinite()) {
      throw Error("BaseDistribution: non-finite bias");
    }
    log_z0_ = static_cast<double>(n_hidden_) * kLog2;
    for (Eigen::Index j = 0; j < bias_.size(); ++j) {
      log_z0_ += softplus(bias_[j]);
    }
  }

  /// B = 0: the uniform distribution, log Z0 = (n_v + n_h) log 2.
  static BaseDistribution uniform(Eigen::Index n_visible, Eigen::Index n_hidden) {
    return BaseDistribution(Eigen::VectorXd::Zero(n_visible), n_hidden);
  }

  const Eigen::VectorXd& bias() const noexcept { return bias_; }
  Eigen::Index n_visible() const noexcept { return bias_.size(); }
  Eigen::Index n_hidden() const noexcept { return n_hidden_; }
  double log_z0() const noexcept { return log_z0_; }

  void check_matches(const RbmModel& m) const {
    if (n_visible() != m.n_visible() || n_hidden() != m.n_hidden()) {
      throw DimensionError("base distribution is for a " + std::to_string(n_visible()) + "x" +
                           std::to_string(n_hidden()) + " model, got " + std::to_string(m.n_visible()) + "x" +
                           std::to_string(m.n_hidden()) + " (visible x hidden)");
    }
  }

 private:
  Eigen::VectorXd bias_;
  Eigen::Index n_hidden_;
  double log_z0_ = 0.0;
};

enum class Schedule { Linear };

struct AisConfig {
  std::int64_t n_beta = 1024;
  std::int64_t n_samples = 1024;
  std::uint64_t seed = 0;
  Schedule schedule = Schedule::Linear;
  /// Threads for the chains; 0 = all cores. Never affects the result.
  unsigned workers = 0;

  void validate() const {
    if (n_beta < 1 || n_samples < 1) {
      throw Error("AisConfig: n_beta and n_samples must be >= 1");
    }
  }

  /// beta_k of the schedule, k in [0, n_beta].
  double beta(std::int64_t k) const noexcept { return static_cast<double>(k) / static_cast<double>(n_beta); }
};

struct AisResult {
  double log_z_ais = 0.0;
  double log_z0 = 0.0;
  std::vector<double> samples;
  double sample_mean = 0.0;
  double sample_std = 0.0;
  AisConfig config;
  double wall_seconds = 0.0;
};

/// log of sum_h exp(-E_beta(x, h)) for the interpolated energy
/// E_beta = -(1-beta) B.x - beta (b.x + c.h + h^T W x).
inline double log_unnorm_marginal_at_beta(const RbmModel& m, const Eigen::VectorXd& base_bias, double beta,
                                          const BinaryState& x) {
  detail::check_visible(m, x);
  if (base_bias.size() != m.n_visible()) {
    throw DimensionError("base bias length does not match the visible layer");
  }
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw Error("beta must lie in [0, 1]");
  }
  const Eigen::ArrayXd a = (m.hidden_bias() + m.weights() * x.vector()).array();
  return (1.0 - beta) * base_bias.dot(x.vector()) + beta * m.visible_bias().dot(x.vector()) +
         softplus_sum(beta * a);
}

/// Block-Gibbs transition that leaves p_beta invariant.
template <typename Rng>
BinaryState annealed_gibbs_step(const RbmModel& m, const Eigen::VectorXd& base_bias, double beta,
                                const BinaryState& x, Rng& rng) {
  detail::check_visible(m, x);
  if (base_bias.size() != m.n_visible()) {
    throw DimensionError("base bias length does not match the visible layer");
  }
  const Eigen::ArrayXd ph = sigmoid_array(beta * (m.hidden_bias() + m.weights() * x.vector()).array());
  const BinaryState h = detail::sample_bernoulli(ph, rng);
  const Eigen::ArrayXd pv = sigmoid_array(
      ((1.0 - beta) * base_bias + beta * (m.visible_bias() + m.weights().transpose() * h.vector())).array());
  return detail::sample_bernoulli(pv, rng);
}

inline double relative_difference_xi(double log_z_exact, double log_z_ais) {
  if (log_z_exact == 0.0) {
    throw Error("relative_difference_xi: exact log Z is zero");
  }
  return std::abs((log_z_exact - log_z_ais) / log_z_exact);
}

namespace detail {

/// One AIS chain with preallocated buffers. Performs, per chain,
/// x ~ p0; for k = 1..n: log w += f_k(x) - f_{k-1}(x); if k < n: x ~ T_k(x).
class AisChain {
 public:
  AisChain(const RbmModel& m, const BaseDistribution& base)
      : m_(m),
        base_bias_(base.bias()),
        lin_gap_(m.visible_bias() - base.bias()),
        p0_(sigmoid_array(base.bias().array())),
        x_(m.n_visible()),
        h_(m.n_hidden()),
        a_(m.n_hidden()),
        z_(m.n_hidden()),
        e_(m.n_hidden()),
        ph_(m.n_hidden()),
        v_(m.n_visible()) {}

  template <typename Rng>
  double run(const AisConfig& cfg, Rng& rng) {
    const Eigen::Index nv = m_.n_visible();
    const Eigen::Index nh = m_.n_hidden();
    for (Eigen::Index j = 0; j < nv; ++j) {
      x_[j] = rng.bernoulli(p0_[j]) ? 1.0 : 0.0;
    }
    refresh_affine();
    double log_w = 0.0;
    for (std::int64_t k = 1; k <= cfg.n_beta; ++k) {
      const double beta_prev = cfg.beta(k - 1);
      const double beta = cfg.beta(k);
      // f_beta(x) = (1-beta) B.x + beta b.x + sum_i softplus(beta a_i)
      z_ = beta_prev * a_;
      const double sp_prev = softplus_sum(z_);
      z_ = beta * a_;
      e_ = (-z_.abs()).exp();
      const double sp = (z_.max(0.0) + (1.0 + e_).log()).sum();
      log_w += (beta - beta_prev) * lin_ + (sp - sp_prev);
      if (k == cfg.n_beta) {
        break;
      }
      ph_ = 1.0 / (1.0 + e_);
      ph_ = (z_ >= 0.0).select(ph_, e_ * ph_);
      for (Eigen::Index i = 0; i < nh; ++i) {
        h_[i] = rng.bernoulli(ph_[i]) ? 1.0 : 0.0;
      }
      v_.matrix().noalias() = m_.weights().transpose() * h_;
      v_ = (1.0 - beta) * base_bias_.array() + beta * (m_.visible_bias().array() + v_);
      v_ = sigmoid_array(v_);
      for (Eigen::Index j = 0; j < nv; ++j) {
        x_[j] = rng.bernoulli(v_[j]) ? 1.0 : 0.0;
      }
      refresh_affine();
    }
    return log_w;
  }

 private:
  void refresh_affine() {
    a_.matrix().noalias() = m_.weights() * x_;
    a_ += m_.hidden_bias().array();
    lin_ = lin_gap_.dot(x_);
  }

  const RbmModel& m_;
  const Eigen::VectorXd& base_bias_;
  Eigen::VectorXd lin_gap_;
  Eigen::ArrayXd p0_;
  Eigen::VectorXd x_;
  Eigen::VectorXd h_;
  Eigen::ArrayXd a_;
  Eigen::ArrayXd z_;
  Eigen::ArrayXd e_;
  Eigen::ArrayXd ph_;
  Eigen::ArrayXd v_;
  double lin_ = 0.0;
};

}  // namespace detail

/// Annealed importance sampling estimate of log Z along the linear path
/// from `base` (beta = 0) to `model` (beta = 1).
///
/// Chain i draws from chain_rng(config.seed, i), and the log-mean-exp
/// reduction runs in chain order after all chains finish, so the result is
/// bitwise independent of config.workers. A non-finite chain weight is an
/// error, never silently dropped.
inline AisResult run_ais(const RbmModel& model, const BaseDistribution& base, const AisConfig& config) {
  config.validate();
  base.check_matches(model);
  const auto start = std::chrono::steady_clock::now();

  AisResult out;
  out.config = config;
  out.log_z0 = base.log_z0();
  out.samples.resize(static_cast<std::size_t>(config.n_samples));

  const std::size_t n = out.samples.size();
  const unsigned workers = config.workers == 0 ? default_workers() : config.workers;
  const std::size_t n_blocks = std::min<std::size_t>(n, std::max(1u, workers) * 8u);
  parallel_for(n_blocks, workers, [&](std::size_t blk) {
    detail::AisChain chain(model, base);
    for (std::size_t i = blk * n / n_blocks; i < (blk + 1) * n / n_blocks; ++i) {
      auto rng = chain_rng(config.seed, i);
      out.samples[i] = chain.run(config, rng) + base.log_z0();
    }
  });

  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(out.samples[i])) {
      throw Error("run_ais: chain " + std::to_string(i) + " produced a non-finite log weight");
    }
  }
  out.log_z_ais = log_mean_exp(out.samples);
  double sum = 0.0;
  for (double s : out.samples) {
    sum += s;
  }
  out.sample_mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double s : out.samples) {
    ss += (s - out.sample_mean) * (s - out.sample_mean);
  }
  out.sample_std = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace zest

#endif  // ZEST_AIS_HPP

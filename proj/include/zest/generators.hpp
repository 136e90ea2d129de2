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

#ifndef ZEST_GENERATORS_HPP
#define ZEST_GENERATORS_HPP

#include "zest/rbm.hpp"
#include "zest/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace zest {

/// Gaussian weights whose own mean and spread are Gaussian draws.
struct GwgmParams {
  Eigen::Index n_visible = 20;
  Eigen::Index n_hidden = 180;
  double mu_mu = 0.0;
  double sigma_mu = 0.0;
  double mu_sigma = 0.0;
  double sigma_sigma = 0.0;
  double lambda = 0.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (n_visible < 1 || n_hidden < 1) {
      throw Error("GwgmParams: layer sizes must be positive");
    }
    if (sigma_mu < 0.0 || sigma_sigma < 0.0 || lambda < 0.0) {
      throw Error("GwgmParams: sigma_mu, sigma_sigma and lambda must be >= 0");
    }
  }
};

/// Block-diagonal assembly of GWGM blocks. Block k is drawn with seed
/// derive_seed(seed, k); the per-block `seed` fields are ignored.
struct BmsParams {
  std::vector<GwgmParams> blocks;
  std::uint64_t seed = 0;
};

struct BmsInstance {
  RbmModel model;
  std::vector<RbmModel> blocks;
};

/// The family used for the hard instances: n_v = 20, n_h = 180 and
/// (mu_mu, sigma_mu, mu_sigma, sigma_sigma, lambda) = (-10, 10, 20, 10, 0.1).
inline GwgmParams hard_gwgm_params(std::uint64_t seed) {
  return GwgmParams{20, 180, -10.0, 10.0, 20.0, 10.0, 0.1, seed};
}

/// Draws mu_W ~ N(mu_mu, sigma_mu^2) and sigma_W ~ N(mu_sigma, sigma_sigma^2)
/// (clamped at 0) once for the matrix, then W_ij ~ N(mu_W, sigma_W^2) and
/// every bias ~ N(lambda mu_W, (lambda sigma_W)^2).
inline RbmModel generate_gwgm(const GwgmParams& p) {
  p.validate();
  Philox4x32 rng(mix64(p.seed));
  std::normal_distribution<double> unit(0.0, 1.0);
  const double mu_w = p.mu_mu + p.sigma_mu * unit(rng);
  const double sigma_w = std::max(0.0, p.mu_sigma + p.sigma_sigma * unit(rng));

  Eigen::MatrixXd w(p.n_hidden, p.n_visible);
  for (Eigen::Index i = 0; i < p.n_hidden; ++i) {
    for (Eigen::Index j = 0; j < p.n_visible; ++j) {
      w(i, j) = mu_w + sigma_w * unit(rng);
    }
  }
  const double mu_bias = p.lambda * mu_w;
  const double sigma_bias = p.lambda * sigma_w;
  Eigen::VectorXd b(p.n_visible);
  Eigen::VectorXd c(p.n_hidden);
  for (Eigen::Index j = 0; j < p.n_visible; ++j) {
    b[j] = mu_bias + sigma_bias * unit(rng);
  }
  for (Eigen::Index i = 0; i < p.n_hidden; ++i) {
    c[i] = mu_bias + sigma_bias * unit(rng);
  }
  return RbmModel(std::move(w), std::move(b), std::move(c));
}

/// Places the blocks on the diagonal; off-block couplings are exactly 0.
inline RbmModel assemble_block_diagonal(std::span<const RbmModel> blocks) {
  if (blocks.empty()) {
    throw Error("assemble_block_diagonal: no blocks");
  }
  Eigen::Index nv = 0;
  Eigen::Index nh = 0;
  for (const auto& blk : blocks) {
    nv += blk.n_visible();
    nh += blk.n_hidden();
  }
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(nh, nv);
  Eigen::VectorXd b(nv);
  Eigen::VectorXd c(nh);
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  for (const auto& blk : blocks) {
    w.block(row, col, blk.n_hidden(), blk.n_visible()) = blk.weights();
    b.segment(col, blk.n_visible()) = blk.visible_bias();
    c.segment(row, blk.n_hidden()) = blk.hidden_bias();
    row += blk.n_hidden();
    col += blk.n_visible();
  }
  return RbmModel(std::move(w), std::move(b), std::move(c));
}

inline BmsInstance generate_bms(const BmsParams& p) {
  if (p.blocks.empty()) {
    throw Error("BmsParams: at least one block is required");
  }
  std::vector<RbmModel> blocks;
  blocks.reserve(p.blocks.size());
  for (std::size_t k = 0; k < p.blocks.size(); ++k) {
    GwgmParams bp = p.blocks[k];
    bp.seed = derive_seed(p.seed, k);
    blocks.push_back(generate_gwgm(bp));
  }
  RbmModel assembled = assemble_block_diagonal(blocks);
  return BmsInstance{std::move(assembled), std::move(blocks)};
}

}  // namespace zest

#endif  // ZEST_GENERATORS_HPP

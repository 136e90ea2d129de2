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

#ifndef ZEST_TRAINER_HPP
#define ZEST_TRAINER_HPP

#include "zest/dataset.hpp"
#include "zest/exact.hpp"
#include "zest/rbm.hpp"
#include "zest/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace zest {

struct TrainConfig {
  Eigen::Index n_hidden = 20;
  double learning_rate = 0.05;
  int epochs = 10;
  int batch_size = 100;
  int cd_k = 1;
  std::uint64_t seed = 0;
  /// Epochs after which the model is recorded; 0 means the initial weights.
  std::vector<int> snapshot_epochs;

  void validate() const {
    if (n_hidden < 1 || !(learning_rate > 0.0) || epochs < 0 || batch_size < 1 || cd_k < 1) {
      throw Error("TrainConfig: n_hidden, learning_rate, batch_size, cd_k must be positive, epochs >= 0");
    }
    for (int e : snapshot_epochs) {
      if (e < 0 || e > epochs) {
        throw Error("TrainConfig: snapshot epoch " + std::to_string(e) + " outside [0, " + std::to_string(epochs) +
                    "]");
      }
    }
  }
};

struct Snapshot {
  int epoch = 0;
  RbmModel model;
};

namespace detail {

template <typename Rng>
Eigen::MatrixXd sample_matrix(const Eigen::MatrixXd& p, Rng& rng) {
  Eigen::MatrixXd s(p.rows(), p.cols());
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    for (Eigen::Index c = 0; c < p.cols(); ++c) {
      s(r, c) = rng.bernoulli(p(r, c)) ? 1.0 : 0.0;
    }
  }
  return s;
}

inline Eigen::MatrixXd logistic(const Eigen::MatrixXd& z) {
  return z.unaryExpr([](double v) { return sigmoid(v); });
}

}  // namespace detail

/// Minibatch CD-k. Weights start at N(0, 0.01^2), biases at 0; plain SGD,
/// no momentum or weight decay. The positive phase uses hidden
/// probabilities; the negative phase runs k block-Gibbs steps from a
/// sampled hidden state and uses the final hidden probabilities.
inline std::vector<Snapshot> train_cd(const BinaryDataset& data, const TrainConfig& cfg) {
  cfg.validate();
  if (data.empty()) {
    throw Error("train_cd: empty dataset");
  }
  const auto nv = static_cast<Eigen::Index>(data.n_features());
  const Eigen::Index nh = cfg.n_hidden;
  Philox4x32 rng(mix64(cfg.seed));
  std::normal_distribution<double> unit(0.0, 1.0);

  Eigen::MatrixXd w(nh, nv);
  for (Eigen::Index i = 0; i < nh; ++i) {
    for (Eigen::Index j = 0; j < nv; ++j) {
      w(i, j) = 0.01 * unit(rng);
    }
  }
  Eigen::VectorXd b = Eigen::VectorXd::Zero(nv);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(nh);

  const Eigen::MatrixXd all = data.rows_matrix(0, data.n_examples());
  std::vector<std::size_t> order(data.n_examples());
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::vector<Snapshot> snapshots;
  auto record = [&](int epoch) {
    if (std::find(cfg.snapshot_epochs.begin(), cfg.snapshot_epochs.end(), epoch) != cfg.snapshot_epochs.end()) {
      snapshots.push_back(Snapshot{epoch, RbmModel(w, b, c)});
    }
  };
  record(0);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.below(static_cast<std::uint32_t>(i))]);
    }
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      const auto n = static_cast<Eigen::Index>(stop - start);
      Eigen::MatrixXd x0(n, nv);
      for (Eigen::Index r = 0; r < n; ++r) {
        x0.row(r) = all.row(static_cast<Eigen::Index>(order[start + static_cast<std::size_t>(r)]));
      }
      const Eigen::MatrixXd ph0 = detail::logistic((x0 * w.transpose()).rowwise() + c.transpose());
      Eigen::MatrixXd h = detail::sample_matrix(ph0, rng);
      Eigen::MatrixXd xk;
      Eigen::MatrixXd phk;
      for (int step = 0; step < cfg.cd_k; ++step) {
        xk = detail::sample_matrix(detail::logistic((h * w).rowwise() + b.transpose()), rng);
        phk = detail::logistic((xk * w.transpose()).rowwise() + c.transpose());
        if (step + 1 < cfg.cd_k) {
          h = detail::sample_matrix(phk, rng);
        }
      }
      const double scale = cfg.learning_rate / static_cast<double>(n);
      w += scale * (ph0.transpose() * x0 - phk.transpose() * xk);
      b += scale * (x0.colwise().sum() - xk.colwise().sum()).transpose();
      c += scale * (ph0.colwise().sum() - phk.colwise().sum()).transpose();
    }
    record(epoch);
  }
  return snapshots;
}

/// Root mean square of the coupling weights (biases excluded).
inline double rms_weights(const RbmModel& m) {
  return std::sqrt(m.weights().squaredNorm() / static_cast<double>(m.weights().size()));
}

/// Mean log-likelihood of the dataset under the model, using the exact
/// partition function.
inline double exact_log_likelihood(const RbmModel& m, const BinaryDataset& data, int max_enum_bits = 26) {
  const double log_z = exact_log_z(m, max_enum_bits).log_z;
  double total = 0.0;
  for (std::size_t r = 0; r < data.n_examples(); ++r) {
    total -= free_energy_visible(m, data.row(r));
  }
  return total / static_cast<double>(data.n_examples()) - log_z;
}

}  // namespace zest

#endif  // ZEST_TRAINER_HPP

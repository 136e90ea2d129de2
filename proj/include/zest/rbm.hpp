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

#ifndef ZEST_RBM_HPP
#define ZEST_RBM_HPP

#include "zest/math.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace zest {

/// A vector of {0,1} units, stored as doubles so it feeds straight into
/// the affine terms of the energy.
class BinaryState {
 public:
  BinaryState() = default;

  explicit BinaryState(Eigen::Index n) : bits_(Eigen::VectorXd::Zero(n)) {}

  explicit BinaryState(Eigen::VectorXd bits) : bits_(std::move(bits)) {
    for (Eigen::Index i = 0; i < bits_.size(); ++i) {
      if (bits_[i] != 0.0 && bits_[i] != 1.0) {
        throw Error("BinaryState: entry " + std::to_string(i) + " is not 0 or 1");
      }
    }
  }

  BinaryState(std::initializer_list<int> bits) : bits_(static_cast<Eigen::Index>(bits.size())) {
    Eigen::Index i = 0;
    for (int b : bits) {
      if (b != 0 && b != 1) {
        throw Error("BinaryState: entries must be 0 or 1");
      }
      bits_[i++] = b;
    }
  }

  static BinaryState ones(Eigen::Index n) { return BinaryState(Eigen::VectorXd::Ones(n)); }

  Eigen::Index size() const noexcept { return bits_.size(); }
  bool operator[](Eigen::Index i) const noexcept { return bits_[i] != 0.0; }
  void set(Eigen::Index i, bool v) noexcept { bits_[i] = v ? 1.0 : 0.0; }
  void flip(Eigen::Index i) noexcept { bits_[i] = 1.0 - bits_[i]; }

  const Eigen::VectorXd& vector() const noexcept { return bits_; }

  /// Interprets bit i as the i-th binary digit of the result (n <= 64).
  std::uint64_t to_index() const noexcept {
    std::uint64_t v = 0;
    for (Eigen::Index i = 0; i < bits_.size(); ++i) {
      if (bits_[i] != 0.0) {
        v |= std::uint64_t{1} << i;
      }
    }
    return v;
  }

  static BinaryState from_index(std::uint64_t v, Eigen::Index n) {
    BinaryState s(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      s.set(i, ((v >> i) & 1u) != 0);
    }
    return s;
  }

  friend bool operator==(const BinaryState& a, const BinaryState& b) { return a.bits_ == b.bits_; }

 private:
  Eigen::VectorXd bits_;
};

/// Binary RBM with energy E(x,h) = -b.x - c.h - h^T W x.
///
/// W is stored hidden x visible, so row i is the receptive field of hidden
/// unit i. Immutable after construction.
class RbmModel {
 public:
  RbmModel(Eigen::MatrixXd weights, Eigen::VectorXd visible_bias, Eigen::VectorXd hidden_bias)
      : weights_(std::move(weights)), b_(std::move(visible_bias)), c_(std::move(hidden_bias)) {
    if (weights_.rows() < 1 || weights_.cols() < 1) {
      throw DimensionError("RbmModel: need at least one visible and one hidden unit");
    }
    if (b_.size() != weights_.cols() || c_.size() != weights_.rows()) {
      throw DimensionError("RbmModel: bias lengths (" + std::to_string(b_.size()) + ", " +
                           std::to_string(c_.size()) + ") do not match weights " +
                           std::to_string(weights_.rows()) + "x" + std::to_string(weights_.cols()));
    }
    if (!weights_.allFinite() || !b_.allFinite() || !c_.allFinite()) {
      throw Error("RbmModel: non-finite parameter");
    }
  }

  static RbmModel zero(Eigen::Index n_visible, Eigen::Index n_hidden) {
    return RbmModel(Eigen::MatrixXd::Zero(n_hidden, n_visible), Eigen::VectorXd::Zero(n_visible),
                    Eigen::VectorXd::Zero(n_hidden));
  }

  Eigen::Index n_visible() const noexcept { return weights_.cols(); }
  Eigen::Index n_hidden() const noexcept { return weights_.rows(); }
  const Eigen::MatrixXd& weights() const noexcept { return weights_; }
  const Eigen::VectorXd& visible_bias() const noexcept { return b_; }
  const Eigen::VectorXd& hidden_bias() const noexcept { return c_; }

  friend bool operator==(const RbmModel& a, const RbmModel& b) {
    return a.weights_.rows() == b.weights_.rows() && a.weights_.cols() == b.weights_.cols() &&
           a.weights_ == b.weights_ && a.b_ == b.b_ && a.c_ == b.c_;
  }

 private:
  Eigen::MatrixXd weights_;
  Eigen::VectorXd b_;
  Eigen::VectorXd c_;
};

namespace detail {

inline void check_visible(const RbmModel& m, const BinaryState& x) {
  if (x.size() != m.n_visible()) {
    throw DimensionError("visible state has " + std::to_string(x.size()) + " units, model has " +
                         std::to_string(m.n_visible()));
  }
}

inline void check_hidden(const RbmModel& m, const BinaryState& h) {
  if (h.size() != m.n_hidden()) {
    throw DimensionError("hidden state has " + std::to_string(h.size()) + " units, model has " +
                         std::to_string(m.n_hidden()));
  }
}

template <typename Rng>
BinaryState sample_bernoulli(const Eigen::ArrayXd& p, Rng& rng) {
  BinaryState s(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    s.set(i, rng.bernoulli(p[i]));
  }
  return s;
}

}  // namespace detail

inline double energy(const RbmModel& m, const BinaryState& x, const BinaryState& h) {
  detail::check_visible(m, x);
  detail::check_hidden(m, h);
  return -m.visible_bias().dot(x.vector()) - m.hidden_bias().dot(h.vector()) -
         h.vector().dot(m.weights() * x.vector());
}

/// F(x) with exp(-F(x)) = sum_h exp(-E(x,h)).
inline double free_energy_visible(const RbmModel& m, const BinaryState& x) {
  detail::check_visible(m, x);
  const Eigen::VectorXd a = m.hidden_bias() + m.weights() * x.vector();
  return -(m.visible_bias().dot(x.vector()) + softplus_sum(a.array()));
}

inline Eigen::VectorXd conditional_hidden(const RbmModel& m, const BinaryState& x) {
  detail::check_visible(m, x);
  return sigmoid_array((m.hidden_bias() + m.weights() * x.vector()).array()).matrix();
}

inline Eigen::VectorXd conditional_visible(const RbmModel& m, const BinaryState& h) {
  detail::check_hidden(m, h);
  return sigmoid_array((m.visible_bias() + m.weights().transpose() * h.vector()).array()).matrix();
}

template <typename Rng>
BinaryState sample_hidden(const RbmModel& m, const BinaryState& x, Rng& rng) {
  return detail::sample_bernoulli(conditional_hidden(m, x).array(), rng);
}

template <typename Rng>
BinaryState sample_visible(const RbmModel& m, const BinaryState& h, Rng& rng) {
  return detail::sample_bernoulli(conditional_visible(m, h).array(), rng);
}

/// One block-Gibbs sweep x -> h -> x'.
template <typename Rng>
BinaryState gibbs_step(const RbmModel& m, const BinaryState& x, Rng& rng) {
  return sample_visible(m, sample_hidden(m, x, rng), rng);
}

/// Metropolis move on the visible marginal: flip `n_flips` distinct
/// uniformly chosen units, accept with min(1, exp(F(x) - F(x'))).
template <typename Rng>
BinaryState metropolis_step(const RbmModel& m, const BinaryState& x, Eigen::Index n_flips, Rng& rng) {
  detail::check_visible(m, x);
  const Eigen::Index n = m.n_visible();
  if (n_flips < 1 || n_flips > n) {
    throw Error("metropolis_step: n_flips=" + std::to_string(n_flips) + " outside [1, " +
                std::to_string(n) + "]");
  }
  // Partial Fisher-Yates over the unit indices.
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    idx[static_cast<std::size_t>(i)] = i;
  }
  BinaryState proposal = x;
  for (Eigen::Index k = 0; k < n_flips; ++k) {
    const auto j = k + static_cast<Eigen::Index>(rng.below(static_cast<std::uint32_t>(n - k)));
    std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(j)]);
    proposal.flip(idx[static_cast<std::size_t>(k)]);
  }
  const double delta = free_energy_visible(m, x) - free_energy_visible(m, proposal);
  if (delta >= 0.0) {
    return proposal;
  }
  return rng.uniform() < std::exp(delta) ? proposal : x;
}

/// Exchanges the roles of the two layers. An involution.
inline RbmModel transpose(const RbmModel& m) {
  return RbmModel(m.weights().transpose(), m.hidden_bias(), m.visible_bias());
}

}  // namespace zest

#endif  // ZEST_RBM_HPP

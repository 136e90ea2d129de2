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

#ifndef ZEST_BASE_HPP
#define ZEST_BASE_HPP

#include "zest/ais.hpp"
#include "zest/dataset.hpp"
#include "zest/rbm.hpp"
#include "zest/rng.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

namespace zest {

enum class Sampler { Uniform, DatasetMeans, Gibbs, Metropolis };
enum class Init { Zero, One, Bernoulli, MeanField, Pseudoinverse };

inline const char* to_string(Sampler s) {
  switch (s) {
    case Sampler::Uniform: return "uniform";
    case Sampler::DatasetMeans: return "dataset";
    case Sampler::Gibbs: return "gibbs";
    case Sampler::Metropolis: return "metropolis";
  }
  return "?";
}

inline const char* to_string(Init i) {
  switch (i) {
    case Init::Zero: return "zero";
    case Init::One: return "one";
    case Init::Bernoulli: return "bernoulli";
    case Init::MeanField: return "mf";
    case Init::Pseudoinverse: return "ps";
  }
  return "?";
}

inline Sampler parse_sampler(const std::string& s) {
  for (Sampler v : {Sampler::Uniform, Sampler::DatasetMeans, Sampler::Gibbs, Sampler::Metropolis}) {
    if (s == to_string(v)) return v;
  }
  throw Error("unknown sampler '" + s + "'");
}

inline Init parse_init(const std::string& s) {
  for (Init v : {Init::Zero, Init::One, Init::Bernoulli, Init::MeanField, Init::Pseudoinverse}) {
    if (s == to_string(v)) return v;
  }
  throw Error("unknown initialization '" + s + "'");
}

/// Metropolis flip count: an absolute number of units or a fraction of
/// the visible layer.
struct FlipCount {
  double value = 1.0;
  bool fraction = false;

  static FlipCount units(int n) { return {static_cast<double>(n), false}; }
  static FlipCount percent(double pct) { return {pct / 100.0, true}; }

  /// Fractions resolve to max(1, round(fraction * n_visible)); the result
  /// is capped at n_visible.
  Eigen::Index resolve(Eigen::Index n_visible) const {
    const auto n = fraction ? std::max<Eigen::Index>(1, std::llround(value * static_cast<double>(n_visible)))
                            : static_cast<Eigen::Index>(value);
    if (n < 1) {
      throw Error("flip count resolves to " + std::to_string(n));
    }
    return std::min(n, n_visible);
  }

  std::string str() const {
    std::ostringstream s;
    if (fraction) {
      s << value * 100.0 << '%';
    } else {
      s << static_cast<long long>(value);
    }
    return s.str();
  }

  static FlipCount parse(const std::string& s) {
    try {
      if (!s.empty() && s.back() == '%') {
        return percent(std::stod(s.substr(0, s.size() - 1)));
      }
      return units(std::stoi(s));
    } catch (const std::exception&) {
      throw Error("bad flip count '" + s + "'");
    }
  }

  friend bool operator==(const FlipCount&, const FlipCount&) = default;
};

/// How to build the starting bias B.
struct StrategySpec {
  Sampler sampler = Sampler::Uniform;
  Init init = Init::MeanField;
  int n_samples = 1024;
  int n_steps = 100;
  FlipCount flips = FlipCount::units(1);
  double epsilon = 0.05;
  bool transpose = false;

  void validate() const {
    if (!(epsilon > 0.0 && epsilon < 0.5)) {
      throw Error("epsilon must lie in (0, 0.5), got " + std::to_string(epsilon));
    }
    if (n_samples < 1 || n_steps < 1) {
      throw Error("n_samples and n_steps must be >= 1");
    }
    if (flips.value <= 0.0) {
      throw Error("flip count must be positive");
    }
  }

  /// Canonical id, e.g. "gibbs/mf/s1024/k100/e0.05" or "uniform+T".
  std::string name() const {
    std::ostringstream s;
    s << to_string(sampler);
    if (sampler == Sampler::Gibbs || sampler == Sampler::Metropolis) {
      s << '/' << to_string(init) << "/s" << n_samples << "/k" << n_steps;
      if (sampler == Sampler::Metropolis) {
        s << "/f" << flips.str();
      }
    }
    if (sampler != Sampler::Uniform) {
      s << "/e" << epsilon;
    }
    if (transpose) {
      s << "+T";
    }
    return s.str();
  }

  friend bool operator==(const StrategySpec&, const StrategySpec&) = default;

  static StrategySpec uniform() { return {}; }

  static StrategySpec dataset(double epsilon = 0.05) {
    StrategySpec s;
    s.sampler = Sampler::DatasetMeans;
    s.epsilon = epsilon;
    return s;
  }

  /// Gibbs sampling from the mean-field state, 1024 samples 100 steps
  /// apart, epsilon = 0.05.
  static StrategySpec gibbs_mf() {
    StrategySpec s;
    s.sampler = Sampler::Gibbs;
    s.init = Init::MeanField;
    return s;
  }

  /// As gibbs_mf, starting from the pseudoinverse state.
  static StrategySpec gibbs_ps() {
    StrategySpec s = gibbs_mf();
    s.init = Init::Pseudoinverse;
    return s;
  }
};

struct MeanEstimate {
  Eigen::VectorXd means;
  std::int64_t n_samples_used = 0;
};

/// Base distribution whose beta = 0 marginal means are the rescaled
/// m' = eps + (1 - 2 eps) m, i.e. B = logit(m').
inline BaseDistribution bias_from_means(const MeanEstimate& est, double epsilon, Eigen::Index n_hidden) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw Error("epsilon must lie in (0, 0.5), got " + std::to_string(epsilon));
  }
  Eigen::VectorXd bias(est.means.size());
  for (Eigen::Index i = 0; i < bias.size(); ++i) {
    const double m = est.means[i];
    if (!(m >= 0.0 && m <= 1.0)) {
      throw Error("mean " + std::to_string(i) + " outside [0, 1]");
    }
    bias[i] = logit(epsilon + (1.0 - 2.0 * epsilon) * m);
  }
  return BaseDistribution(std::move(bias), n_hidden);
}

inline MeanEstimate means_from_dataset(const BinaryDataset& data) {
  if (data.empty()) {
    throw Error("means_from_dataset: empty dataset");
  }
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(data.n_features()));
  for (std::size_t r = 0; r < data.n_examples(); ++r) {
    for (std::size_t j = 0; j < data.n_features(); ++j) {
      if (data.get(r, j)) {
        sum[static_cast<Eigen::Index>(j)] += 1.0;
      }
    }
  }
  return MeanEstimate{sum / static_cast<double>(data.n_examples()),
                      static_cast<std::int64_t>(data.n_examples())};
}

/// Moore-Penrose pseudoinverse by SVD, dropping singular values below
/// max(rows, cols) * eps * sigma_max.
inline Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& a) {
  if (!a.allFinite()) {
    throw Error("pseudoinverse: non-finite entry");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw Error("pseudoinverse: SVD did not converge");
  }
  const Eigen::VectorXd& sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv[0] : 0.0;
  const double tol = static_cast<double>(std::max(a.rows(), a.cols())) * std::numeric_limits<double>::epsilon() *
                     sigma_max;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > tol) {
      inv[i] = 1.0 / sv[i];
    }
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

/// Starting visible state for the mean-estimation chain.
///
/// MeanField sets x_j = 1 iff b_j + sum_i W_ij > 0. Pseudoinverse takes the
/// stationary point x_p = -W^+ c of the energy (W is hidden x visible here),
/// clamps it to [0, 1] and rounds at 0.5.
template <typename Rng>
BinaryState init_state(const RbmModel& m, Init kind, Rng& rng) {
  const Eigen::Index nv = m.n_visible();
  BinaryState x(nv);
  switch (kind) {
    case Init::Zero:
      break;
    case Init::One:
      x = BinaryState::ones(nv);
      break;
    case Init::Bernoulli:
      for (Eigen::Index j = 0; j < nv; ++j) {
        x.set(j, rng.bernoulli(0.5));
      }
      break;
    case Init::MeanField: {
      const Eigen::VectorXd score = m.visible_bias() + m.weights().colwise().sum().transpose();
      for (Eigen::Index j = 0; j < nv; ++j) {
        x.set(j, score[j] > 0.0);
      }
      break;
    }
    case Init::Pseudoinverse: {
      const Eigen::VectorXd xp = -(pseudoinverse(m.weights()) * m.hidden_bias());
      if (!xp.allFinite()) {
        throw Error("pseudoinverse start is not finite");
      }
      for (Eigen::Index j = 0; j < nv; ++j) {
        x.set(j, std::clamp(xp[j], 0.0, 1.0) >= 0.5);
      }
      break;
    }
  }
  return x;
}

/// Averages n_samples visible states, each taken n_steps sampler steps
/// after the previous one (the first after n_steps steps from the start).
template <typename Rng>
MeanEstimate estimate_means_by_sampling(const RbmModel& m, const StrategySpec& spec, Rng& rng) {
  spec.validate();
  if (spec.sampler != Sampler::Gibbs && spec.sampler != Sampler::Metropolis) {
    throw Error("estimate_means_by_sampling: sampler must be gibbs or metropolis");
  }
  const Eigen::Index flips = spec.flips.resolve(m.n_visible());
  BinaryState x = init_state(m, spec.init, rng);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(m.n_visible());
  for (int s = 0; s < spec.n_samples; ++s) {
    for (int k = 0; k < spec.n_steps; ++k) {
      x = spec.sampler == Sampler::Gibbs ? gibbs_step(m, x, rng) : metropolis_step(m, x, flips, rng);
    }
    sum += x.vector();
  }
  return MeanEstimate{sum / static_cast<double>(spec.n_samples), spec.n_samples};
}

/// The model AIS should run on for this strategy.
inline RbmModel target_model(const RbmModel& m, const StrategySpec& spec) {
  return spec.transpose ? transpose(m) : m;
}

/// Builds B for `model` (transposed first when spec.transpose is set, so
/// the result matches target_model(model, spec)). `seed` drives the
/// sampling chain; `data` is required for the dataset strategy.
inline BaseDistribution build_base(const RbmModel& model, const StrategySpec& spec, std::uint64_t seed,
                                   const BinaryDataset* data = nullptr) {
  spec.validate();
  const RbmModel m = target_model(model, spec);
  switch (spec.sampler) {
    case Sampler::Uniform:
      return BaseDistribution::uniform(m.n_visible(), m.n_hidden());
    case Sampler::DatasetMeans: {
      if (data == nullptr) {
        throw Error("dataset strategy needs a dataset");
      }
      if (static_cast<Eigen::Index>(data->n_features()) != m.n_visible()) {
        throw DimensionError("dataset has " + std::to_string(data->n_features()) + " features, model has " +
                             std::to_string(m.n_visible()) + " visible units");
      }
      return bias_from_means(means_from_dataset(*data), spec.epsilon, m.n_hidden());
    }
    case Sampler::Gibbs:
    case Sampler::Metropolis: {
      Philox4x32 rng(mix64(seed));
      return bias_from_means(estimate_means_by_sampling(m, spec, rng), spec.epsilon, m.n_hidden());
    }
  }
  throw Error("unreachable sampler");
}

}  // namespace zest

#endif  // ZEST_BASE_HPP

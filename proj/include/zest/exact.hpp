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

#ifndef ZEST_EXACT_HPP
#define ZEST_EXACT_HPP

#include "zest/math.hpp"
#include "zest/parallel.hpp"
#include "zest/rbm.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace zest {

enum class Layer { Visible, Hidden };

inline const char* to_string(Layer l) { return l == Layer::Visible ? "visible" : "hidden"; }

/// Thrown when an exact evaluation would need more states than allowed.
class EnumerationBudgetError : public Error {
 public:
  EnumerationBudgetError(int required_bits, int max_bits)
      : Error("exact enumeration needs " + std::to_string(required_bits) + " bits but the budget is " +
              std::to_string(max_bits) + " bits"),
        required_bits_(required_bits) {}

  int required_bits() const noexcept { return required_bits_; }

 private:
  int required_bits_;
};

struct ExactZResult {
  double log_z = 0.0;
  Layer enumerated_layer = Layer::Visible;
  std::uint64_t states_visited = 0;
};

struct ExactOptions {
  int max_enum_bits = 26;
  unsigned workers = 0;
  /// States per chunk are 2^chunk_bits; every chunk restarts the affine
  /// terms from scratch, which also bounds the incremental rounding drift.
  int chunk_bits = 16;
};

namespace detail {

inline std::uint64_t gray(std::uint64_t t) noexcept { return t ^ (t >> 1); }

/// log sum_x exp(b.x + sum_i softplus(c_i + W_i.x)) over the visible layer
/// of `m`, walking states in Gray-code order so each step adds or removes
/// one column of W.
inline LogSumExp enumerate_visible_chunk(const RbmModel& m, std::uint64_t begin, std::uint64_t end) {
  const Eigen::MatrixXd& w = m.weights();
  const Eigen::VectorXd& b = m.visible_bias();
  const Eigen::Index nv = m.n_visible();

  const std::uint64_t g0 = gray(begin);
  Eigen::VectorXd a = m.hidden_bias();
  double lin = 0.0;
  for (Eigen::Index j = 0; j < nv; ++j) {
    if ((g0 >> j) & 1u) {
      a += w.col(j);
      lin += b[j];
    }
  }
  LogSumExp acc;
  acc.add(lin + softplus_sum(a.array()));
  for (std::uint64_t t = begin + 1; t < end; ++t) {
    const int j = std::countr_zero(t);
    if ((gray(t) >> j) & 1u) {
      a += w.col(j);
      lin += b[j];
    } else {
      a -= w.col(j);
      lin -= b[j];
    }
    acc.add(lin + softplus_sum(a.array()));
  }
  return acc;
}

}  // namespace detail

/// Exact log Z, summing the larger layer analytically and enumerating the
/// smaller one (the model is transposed first when n_hidden < n_visible).
///
/// The Gray-code walk is split into fixed chunks reduced independently and
/// merged in chunk order, so the result does not depend on `workers`.
inline ExactZResult exact_log_z(const RbmModel& model, const ExactOptions& opts) {
  const bool flip = model.n_hidden() < model.n_visible();
  const RbmModel m = flip ? transpose(model) : model;
  const int bits = static_cast<int>(m.n_visible());
  if (bits > opts.max_enum_bits || bits > 62) {
    throw EnumerationBudgetError(bits, opts.max_enum_bits);
  }
  const std::uint64_t total = std::uint64_t{1} << bits;
  const int chunk_bits = std::clamp(opts.chunk_bits, 0, bits);
  const std::uint64_t chunk = std::uint64_t{1} << chunk_bits;
  const std::size_t n_chunks = static_cast<std::size_t>(total / chunk);

  std::vector<LogSumExp> partial(n_chunks);
  parallel_for(n_chunks, opts.workers, [&](std::size_t k) {
    partial[k] = detail::enumerate_visible_chunk(m, k * chunk, (k + 1) * chunk);
  });
  // Pairwise tree merge in chunk order.
  for (std::size_t stride = 1; stride < n_chunks; stride *= 2) {
    for (std::size_t k = 0; k + stride < n_chunks; k += 2 * stride) {
      partial[k].merge(partial[k + stride]);
    }
  }
  return ExactZResult{partial.front().value(), flip ? Layer::Hidden : Layer::Visible, total};
}

inline ExactZResult exact_log_z(const RbmModel& model, int max_enum_bits = 26, unsigned workers = 0) {
  ExactOptions opts;
  opts.max_enum_bits = max_enum_bits;
  opts.workers = workers;
  return exact_log_z(model, opts);
}

/// log Z by brute force over every joint (x, h) state. Test oracle only:
/// shares no code with exact_log_z beyond the log-sum-exp accumulator.
inline double exact_log_z_joint(const RbmModel& model, int max_bits = 22) {
  const int nv = static_cast<int>(model.n_visible());
  const int nh = static_cast<int>(model.n_hidden());
  if (nv + nh > max_bits || nv + nh > 62) {
    throw EnumerationBudgetError(nv + nh, max_bits);
  }
  const Eigen::MatrixXd& w = model.weights();
  const Eigen::VectorXd& b = model.visible_bias();
  const Eigen::VectorXd& c = model.hidden_bias();
  LogSumExp acc;
  for (std::uint64_t xs = 0; xs < (std::uint64_t{1} << nv); ++xs) {
    for (std::uint64_t hs = 0; hs < (std::uint64_t{1} << nh); ++hs) {
      double neg_e = 0.0;
      for (int j = 0; j < nv; ++j) {
        if ((xs >> j) & 1u) {
          neg_e += b[j];
        }
      }
      for (int i = 0; i < nh; ++i) {
        if (((hs >> i) & 1u) == 0) {
          continue;
        }
        neg_e += c[i];
        for (int j = 0; j < nv; ++j) {
          if ((xs >> j) & 1u) {
            neg_e += w(i, j);
          }
        }
      }
      acc.add(neg_e);
    }
  }
  return acc.value();
}

/// log Z of a block-diagonal model from its blocks: the sum of block logs.
inline double exact_log_z_block(std::span<const RbmModel> blocks, int max_enum_bits = 26, unsigned workers = 0) {
  double total = 0.0;
  for (const auto& block : blocks) {
    total += exact_log_z(block, max_enum_bits, workers).log_z;
  }
  return total;
}

}  // namespace zest

#endif  // ZEST_EXACT_HPP

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

#ifndef ZEST_RNG_HPP
#define ZEST_RNG_HPP

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace zest {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives a child seed from a parent seed and any number of stream ids.
/// Used wherever a job needs its own reproducible seed (chains, sweep rows).
template <typename... Ids>
constexpr std::uint64_t derive_seed(std::uint64_t seed, Ids... ids) noexcept {
  std::uint64_t h = mix64(seed);
  ((h = mix64(h ^ mix64(static_cast<std::uint64_t>(ids) + 0x632be59bd9b4e019ULL))), ...);
  return h;
}

/// 64-bit FNV-1a, for turning instance/strategy names into stream ids.
constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char ch : s) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
///
/// The 128-bit counter is split into a 64-bit stream id (high half) and a
/// 64-bit block index (low half), so `Philox4x32(key, chain)` gives every
/// chain an independent sequence that does not depend on which thread runs
/// it or in which order. Satisfies UniformRandomBitGenerator.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using counter_type = std::array<std::uint32_t, 4>;
  using key_type = std::array<std::uint32_t, 2>;

  Philox4x32() : Philox4x32(0, 0) {}

  explicit Philox4x32(std::uint64_t key, std::uint64_t stream = 0)
      : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
        stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (pos_ == 4) {
      refill();
    }
    return buffer_[pos_++];
  }

  /// 53-bit uniform double in [0, 1).
  double uniform() {
    const std::uint64_t hi = (*this)();
    const std::uint64_t lo = (*this)();
    return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
  }

  /// True with probability p, resolved to 2^-32.
  bool bernoulli(double p) { return static_cast<double>((*this)()) * 0x1.0p-32 < p; }

  /// Unbiased integer in [0, n) by rejection; n > 0.
  std::uint32_t below(std::uint32_t n) {
    const std::uint32_t limit = max() - max() % n;
    std::uint32_t r;
    do {
      r = (*this)();
    } while (r >= limit);
    return r % n;
  }

  std::uint64_t stream() const noexcept { return stream_; }

  /// The raw block function: ten rounds over one counter under one key.
  static counter_type block(counter_type ctr, key_type key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  void refill() {
    const counter_type ctr{static_cast<std::uint32_t>(index_), static_cast<std::uint32_t>(index_ >> 32),
                           static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    buffer_ = block(ctr, key_);
    ++index_;
    pos_ = 0;
  }

  key_type key_;
  std::uint64_t stream_;
  std::uint64_t index_ = 0;
  counter_type buffer_{};
  int pos_ = 4;
};

/// Generator for chain `chain` of a run seeded with `seed`.
inline Philox4x32 chain_rng(std::uint64_t seed, std::uint64_t chain) {
  return Philox4x32(mix64(seed), chain);
}

}  // namespace zest

#endif  // ZEST_RNG_HPP

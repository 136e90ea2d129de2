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

#ifndef ZEST_DATASET_HPP
#define ZEST_DATASET_HPP

#include "zest/math.hpp"
#include "zest/rbm.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace zest {

class IoError : public Error {
 public:
  using Error::Error;
};

/// Binary examples stored as packed 64-bit words, one padded run per row.
class BinaryDataset {
 public:
  BinaryDataset() = default;

  explicit BinaryDataset(std::size_t n_features)
      : n_features_(n_features), words_per_row_((n_features + 63) / 64) {}

  std::size_t n_examples() const noexcept { return n_examples_; }
  std::size_t n_features() const noexcept { return n_features_; }
  bool empty() const noexcept { return n_examples_ == 0; }

  /// Appends an all-zero row and returns its index.
  std::size_t add_row() {
    words_.resize(words_.size() + words_per_row_, 0);
    return n_examples_++;
  }

  std::size_t add_row(const Eigen::VectorXd& bits) {
    if (static_cast<std::size_t>(bits.size()) != n_features_) {
      throw DimensionError("BinaryDataset: row has " + std::to_string(bits.size()) + " features, expected " +
                           std::to_string(n_features_));
    }
    const std::size_t r = add_row();
    for (std::size_t j = 0; j < n_features_; ++j) {
      const double v = bits[static_cast<Eigen::Index>(j)];
      if (v != 0.0 && v != 1.0) {
        throw Error("BinaryDataset: non-binary value in row " + std::to_string(r));
      }
      set(r, j, v != 0.0);
    }
    return r;
  }

  bool get(std::size_t row, std::size_t j) const noexcept {
    return (words_[row * words_per_row_ + j / 64] >> (j % 64)) & 1u;
  }

  void set(std::size_t row, std::size_t j, bool v) noexcept {
    auto& w = words_[row * words_per_row_ + j / 64];
    const std::uint64_t mask = std::uint64_t{1} << (j % 64);
    w = v ? (w | mask) : (w & ~mask);
  }

  BinaryState row(std::size_t r) const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(n_features_));
    for (std::size_t j = 0; j < n_features_; ++j) {
      v[static_cast<Eigen::Index>(j)] = get(r, j) ? 1.0 : 0.0;
    }
    return BinaryState(std::move(v));
  }

  /// Rows [begin, end) as a (end-begin) x n_features matrix.
  Eigen::MatrixXd rows_matrix(std::size_t begin, std::size_t end) const {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(end - begin), static_cast<Eigen::Index>(n_features_));
    for (std::size_t r = begin; r < end; ++r) {
      for (std::size_t j = 0; j < n_features_; ++j) {
        m(static_cast<Eigen::Index>(r - begin), static_cast<Eigen::Index>(j)) = get(r, j) ? 1.0 : 0.0;
      }
    }
    return m;
  }

  friend bool operator==(const BinaryDataset&, const BinaryDataset&) = default;

 private:
  std::size_t n_examples_ = 0;
  std::size_t n_features_ = 0;
  std::size_t words_per_row_ = 0;
  std::vector<std::uint64_t> words_;
};

namespace detail {

inline std::uint32_t read_be32(std::istream& in, const std::string& what) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) {
    throw IoError("truncated file while reading " + what);
  }
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
}

inline std::uint32_t read_le32(std::istream& in, const std::string& what) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) {
    throw IoError("truncated file while reading " + what);
  }
  return (std::uint32_t{b[3]} << 24) | (std::uint32_t{b[2]} << 16) | (std::uint32_t{b[1]} << 8) | b[0];
}

inline void write_le32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                              static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b.data(), 4);
}

inline std::ifstream open_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  return in;
}

}  // namespace detail

/// Reads an idx3-ubyte image file (magic 0x00000803). A pixel becomes 1
/// iff pixel / 255 >= threshold.
inline BinaryDataset load_idx(const std::filesystem::path& path, double threshold = 0.5) {
  auto in = detail::open_binary(path);
  const std::uint32_t magic = detail::read_be32(in, "magic");
  if (magic != 0x00000803u) {
    std::ostringstream msg;
    msg << path.string() << ": bad idx magic 0x" << std::hex << magic << " (expected 0x803)";
    throw IoError(msg.str());
  }
  const std::uint32_t n = detail::read_be32(in, "image count");
  const std::uint32_t rows = detail::read_be32(in, "row count");
  const std::uint32_t cols = detail::read_be32(in, "column count");
  const std::size_t features = std::size_t{rows} * cols;
  BinaryDataset ds(features);
  std::vector<unsigned char> pixels(features);
  for (std::uint32_t k = 0; k < n; ++k) {
    if (!in.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(features))) {
      throw IoError(path.string() + ": truncated at image " + std::to_string(k) + " of " + std::to_string(n));
    }
    const std::size_t r = ds.add_row();
    for (std::size_t j = 0; j < features; ++j) {
      if (static_cast<double>(pixels[j]) / 255.0 >= threshold) {
        ds.set(r, j, true);
      }
    }
  }
  return ds;
}

/// Reads `label idx:val ...` lines (1-based indices). Any listed index is
/// a 1 bit; labels and values are discarded.
inline BinaryDataset load_libsvm_binary(const std::filesystem::path& path, std::size_t n_features) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  BinaryDataset ds(n_features);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.find_first_not_of(" \t") == std::string::npos) {
      continue;
    }
    std::istringstream tokens(line);
    std::string label;
    tokens >> label;
    const std::size_t r = ds.add_row();
    std::string tok;
    while (tokens >> tok) {
      const auto colon = tok.find(':');
      std::size_t idx = 0;
      std::size_t used = 0;
      try {
        idx = std::stoul(tok.substr(0, colon), &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (colon == std::string::npos || colon == 0 || used != colon) {
        throw IoError(path.string() + ":" + std::to_string(line_no) + ": malformed feature '" + tok + "'");
      }
      if (idx < 1 || idx > n_features) {
        throw IoError(path.string() + ":" + std::to_string(line_no) + ": feature index " + std::to_string(idx) +
                      " outside [1, " + std::to_string(n_features) + "]");
      }
      ds.set(r, idx - 1, true);
    }
  }
  return ds;
}

/// Packed dataset file: "ZBD1", u32 n_examples, u32 n_features (both
/// little-endian), then each row in ceil(n_features / 8) bytes with
/// feature j at bit (j % 8) of byte j / 8.
inline void save_zbd(const BinaryDataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  out.write("ZBD1", 4);
  detail::write_le32(out, static_cast<std::uint32_t>(ds.n_examples()));
  detail::write_le32(out, static_cast<std::uint32_t>(ds.n_features()));
  const std::size_t row_bytes = (ds.n_features() + 7) / 8;
  std::vector<char> buf(row_bytes);
  for (std::size_t r = 0; r < ds.n_examples(); ++r) {
    std::fill(buf.begin(), buf.end(), 0);
    for (std::size_t j = 0; j < ds.n_features(); ++j) {
      if (ds.get(r, j)) {
        buf[j / 8] = static_cast<char>(buf[j / 8] | (1 << (j % 8)));
      }
    }
    out.write(buf.data(), static_cast<std::streamsize>(row_bytes));
  }
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

inline BinaryDataset load_zbd(const std::filesystem::path& path) {
  auto in = detail::open_binary(path);
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), 4) || std::string(magic.data(), 4) != "ZBD1") {
    throw IoError(path.string() + ": not a ZBD1 dataset");
  }
  const std::uint32_t n = detail::read_le32(in, "example count");
  const std::uint32_t f = detail::read_le32(in, "feature count");
  BinaryDataset ds(f);
  const std::size_t row_bytes = (std::size_t{f} + 7) / 8;
  std::vector<unsigned char> buf(row_bytes);
  for (std::uint32_t r = 0; r < n; ++r) {
    if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(row_bytes))) {
      throw IoError(path.string() + ": truncated at row " + std::to_string(r));
    }
    const std::size_t row = ds.add_row();
    for (std::size_t j = 0; j < f; ++j) {
      if ((buf[j / 8] >> (j % 8)) & 1u) {
        ds.set(row, j, true);
      }
    }
  }
  return ds;
}

}  // namespace zest

#endif  // ZEST_DATASET_HPP

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

// JSON documents: model weights, base distributions, AIS results.
// Doubles are written in shortest round-trip form, so save/load is
// bit-exact.

#ifndef ZEST_IO_HPP
#define ZEST_IO_HPP

#include "zest/ais.hpp"
#include "zest/base.hpp"
#include "zest/dataset.hpp"
#include "zest/rbm.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace zest {

using json = nlohmann::json;

inline constexpr const char* kModelFormat = "zest-rbm-v1";
inline constexpr const char* kBaseFormat = "zest-base-v1";
inline constexpr const char* kResultFormat = "zest-ais-result-v1";

namespace detail {

inline void expect_format(const json& doc, const char* format) {
  if (!doc.is_object() || !doc.contains("format") || !doc["format"].is_string()) {
    throw IoError(std::string("document has no format tag (expected ") + format + ")");
  }
  const auto tag = doc["format"].get<std::string>();
  if (tag != format) {
    throw IoError("unsupported format tag '" + tag + "' (expected " + format + ")");
  }
}

inline json to_array(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

inline Eigen::VectorXd vector_field(const json& doc, const char* key, Eigen::Index expected) {
  if (!doc.contains(key) || !doc[key].is_array()) {
    throw IoError(std::string("missing array field '") + key + "'");
  }
  const auto values = doc[key].get<std::vector<double>>();
  if (static_cast<Eigen::Index>(values.size()) != expected) {
    throw IoError(std::string("field '") + key + "' has " + std::to_string(values.size()) + " entries, expected " +
                  std::to_string(expected));
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(), expected);
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace detail

inline void write_json_file(const json& doc, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  out << doc.dump(2) << '\n';
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

// ---- model ----------------------------------------------------------------

inline json model_to_json(const RbmModel& m) {
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(m.weights().size()));
  for (Eigen::Index i = 0; i < m.n_hidden(); ++i) {
    for (Eigen::Index j = 0; j < m.n_visible(); ++j) {
      w.push_back(m.weights()(i, j));
    }
  }
  return json{{"format", kModelFormat},
              {"n_visible", m.n_visible()},
              {"n_hidden", m.n_hidden()},
              {"weights", w},
              {"visible_bias", detail::to_array(m.visible_bias())},
              {"hidden_bias", detail::to_array(m.hidden_bias())}};
}

inline RbmModel model_from_json(const json& doc) {
  detail::expect_format(doc, kModelFormat);
  const auto nv = doc.at("n_visible").get<Eigen::Index>();
  const auto nh = doc.at("n_hidden").get<Eigen::Index>();
  if (nv < 1 || nh < 1) {
    throw IoError("model dimensions must be positive");
  }
  const Eigen::VectorXd flat = detail::vector_field(doc, "weights", nv * nh);
  Eigen::MatrixXd w(nh, nv);
  for (Eigen::Index i = 0; i < nh; ++i) {
    for (Eigen::Index j = 0; j < nv; ++j) {
      w(i, j) = flat[i * nv + j];
    }
  }
  return RbmModel(std::move(w), detail::vector_field(doc, "visible_bias", nv),
                  detail::vector_field(doc, "hidden_bias", nh));
}

inline void save_model(const RbmModel& m, const std::filesystem::path& path) { write_json_file(model_to_json(m), path); }

inline RbmModel load_model(const std::filesystem::path& path) {
  try {
    return model_from_json(detail::read_json_file(path));
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

// ---- strategy / base --------------------------------------------------------

inline json spec_to_json(const StrategySpec& s) {
  return json{{"name", s.name()},
              {"sampler", to_string(s.sampler)},
              {"init", to_string(s.init)},
              {"samples", s.n_samples},
              {"steps", s.n_steps},
              {"flips", s.flips.str()},
              {"epsilon", s.epsilon},
              {"transpose", s.transpose}};
}

inline StrategySpec spec_from_json(const json& j) {
  StrategySpec s;
  s.sampler = parse_sampler(j.at("sampler").get<std::string>());
  if (j.contains("init")) s.init = parse_init(j["init"].get<std::string>());
  if (j.contains("samples")) s.n_samples = j["samples"].get<int>();
  if (j.contains("steps")) s.n_steps = j["steps"].get<int>();
  if (j.contains("flips")) {
    s.flips = j["flips"].is_string() ? FlipCount::parse(j["flips"].get<std::string>())
                                     : FlipCount::units(j["flips"].get<int>());
  }
  if (j.contains("epsilon")) s.epsilon = j["epsilon"].get<double>();
  if (j.contains("transpose")) s.transpose = j["transpose"].get<bool>();
  s.validate();
  return s;
}

inline json base_to_json(const BaseDistribution& base, const std::optional<StrategySpec>& spec = std::nullopt) {
  json doc{{"format", kBaseFormat},
           {"n_visible", base.n_visible()},
           {"n_hidden", base.n_hidden()},
           {"B", detail::to_array(base.bias())},
           {"log_z0", base.log_z0()}};
  doc["spec"] = spec ? spec_to_json(*spec) : json::object();
  return doc;
}

/// The stored log_z0 must agree with the one implied by B.
inline BaseDistribution base_from_json(const json& doc) {
  detail::expect_format(doc, kBaseFormat);
  const auto nv = doc.at("n_visible").get<Eigen::Index>();
  const auto nh = doc.at("n_hidden").get<Eigen::Index>();
  BaseDistribution base(detail::vector_field(doc, "B", nv), nh);
  const double stored = doc.at("log_z0").get<double>();
  if (std::abs(stored - base.log_z0()) > 1e-9 * std::max(1.0, std::abs(stored))) {
    throw IoError("base document log_z0 is inconsistent with its bias vector");
  }
  return base;
}

inline void save_base(const BaseDistribution& base, const std::filesystem::path& path,
                      const std::optional<StrategySpec>& spec = std::nullopt) {
  write_json_file(base_to_json(base, spec), path);
}

inline BaseDistribution load_base(const std::filesystem::path& path) {
  try {
    return base_from_json(detail::read_json_file(path));
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

// ---- AIS result --------------------------------------------------------------

inline json result_to_json(const AisResult& r, bool with_samples = true) {
  json doc{{"format", kResultFormat},
           {"log_z_ais", r.log_z_ais},
           {"log_z0", r.log_z0},
           {"sample_mean", r.sample_mean},
           {"sample_std", r.sample_std},
           {"n_beta", r.config.n_beta},
           {"n_samples", r.config.n_samples},
           {"seed", r.config.seed},
           {"schedule", "linear"},
           {"wall_seconds", r.wall_seconds}};
  if (with_samples) {
    doc["samples"] = r.samples;
  }
  return doc;
}

inline AisResult result_from_json(const json& doc) {
  detail::expect_format(doc, kResultFormat);
  AisResult r;
  r.log_z_ais = doc.at("log_z_ais").get<double>();
  r.log_z0 = doc.at("log_z0").get<double>();
  r.sample_mean = doc.at("sample_mean").get<double>();
  r.sample_std = doc.at("sample_std").get<double>();
  r.config.n_beta = doc.at("n_beta").get<std::int64_t>();
  r.config.n_samples = doc.at("n_samples").get<std::int64_t>();
  r.config.seed = doc.at("seed").get<std::uint64_t>();
  if (doc.value("schedule", std::string("linear")) != "linear") {
    throw IoError("unsupported schedule");
  }
  r.wall_seconds = doc.value("wall_seconds", 0.0);
  if (doc.contains("samples")) {
    r.samples = doc["samples"].get<std::vector<double>>();
    if (static_cast<std::int64_t>(r.samples.size()) != r.config.n_samples) {
      throw IoError("result has " + std::to_string(r.samples.size()) + " samples, n_samples says " +
                    std::to_string(r.config.n_samples));
    }
  }
  return r;
}

inline void save_result(const AisResult& r, const std::filesystem::path& path, bool with_samples = true) {
  write_json_file(result_to_json(r, with_samples), path);
}

inline AisResult load_result(const std::filesystem::path& path) {
  try {
    return result_from_json(detail::read_json_file(path));
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace zest

#endif  // ZEST_IO_HPP

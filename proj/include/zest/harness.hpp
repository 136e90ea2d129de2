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

#ifndef ZEST_HARNESS_HPP
#define ZEST_HARNESS_HPP

#include "zest/ais.hpp"
#include "zest/base.hpp"
#include "zest/dataset.hpp"
#include "zest/exact.hpp"
#include "zest/generators.hpp"
#include "zest/io.hpp"
#include "zest/parallel.hpp"
#include "zest/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace zest {

inline constexpr double kXiThreshold = 0.05;
inline constexpr const char* kPlanFormat = "zest-sweep-v1";
inline constexpr const char* kReportFormat = "zest-report-v1";

// ---- strategy grid -----------------------------------------------------------

/// Which "number of bit changes" row of the parameter table to use.
enum class FlipFamily {
  Fractional,  // 5%, 10%, 15%, 25%, 50%, 100% of the visible units
  Absolute,    // 1, 10, 40, 80 units
};

struct GridResolution {
  std::vector<StrategySpec> specs;
  /// Combination count the grid is expected to have.
  std::size_t expected = 325;

  bool matches() const noexcept { return specs.size() == expected; }

  std::string warning(const std::string& grid) const {
    if (matches()) {
      return {};
    }
    return "grid " + grid + " resolved " + std::to_string(specs.size()) + " strategies; expected " +
           std::to_string(expected);
  }
};

/// The full parameter table: Gibbs with steps {1, 10, 100}, Metropolis with
/// steps {10, 100} and the chosen flip family, each crossed with epsilon
/// {0.01, 0.05, 0.10, 0.20} and the five initializations, 1024 samples.
inline GridResolution resolve_parameter_grid(FlipFamily family, bool transpose = false) {
  static constexpr Init kInits[] = {Init::Zero, Init::One, Init::Bernoulli, Init::MeanField, Init::Pseudoinverse};
  static constexpr double kEps[] = {0.01, 0.05, 0.10, 0.20};
  std::vector<FlipCount> flips;
  if (family == FlipFamily::Fractional) {
    for (double pct : {5.0, 10.0, 15.0, 25.0, 50.0, 100.0}) {
      flips.push_back(FlipCount::percent(pct));
    }
  } else {
    for (int n : {1, 10, 40, 80}) {
      flips.push_back(FlipCount::units(n));
    }
  }
  GridResolution out;
  for (Init init : kInits) {
    for (int steps : {1, 10, 100}) {
      for (double eps : kEps) {
        StrategySpec s;
        s.sampler = Sampler::Gibbs;
        s.init = init;
        s.n_samples = 1024;
        s.n_steps = steps;
        s.epsilon = eps;
        s.transpose = transpose;
        out.specs.push_back(s);
      }
    }
    for (int steps : {10, 100}) {
      for (const FlipCount& f : flips) {
        for (double eps : kEps) {
          StrategySpec s;
          s.sampler = Sampler::Metropolis;
          s.init = init;
          s.n_samples = 1024;
          s.n_steps = steps;
          s.flips = f;
          s.epsilon = eps;
          s.transpose = transpose;
          out.specs.push_back(s);
        }
      }
    }
  }
  return out;
}

/// Parses "uniform", "dataset", "gibbs-mf", "gibbs-ps", optionally with a
/// "+T" suffix for the transposed system.
inline StrategySpec parse_preset(std::string name) {
  bool transposed = false;
  if (name.size() > 2 && name.ends_with("+T")) {
    transposed = true;
    name.resize(name.size() - 2);
  }
  StrategySpec s;
  if (name == "uniform") {
    s = StrategySpec::uniform();
  } else if (name == "dataset") {
    s = StrategySpec::dataset();
  } else if (name == "gibbs-mf") {
    s = StrategySpec::gibbs_mf();
  } else if (name == "gibbs-ps") {
    s = StrategySpec::gibbs_ps();
  } else {
    throw Error("unknown strategy preset '" + name + "'");
  }
  s.transpose = transposed;
  return s;
}

// ---- plan ----------------------------------------------------------------------

inline GwgmParams gwgm_from_json(const json& j) {
  GwgmParams p;
  p.n_visible = j.value("nv", p.n_visible);
  p.n_hidden = j.value("nh", p.n_hidden);
  p.mu_mu = j.value("mu_mu", p.mu_mu);
  p.sigma_mu = j.value("sigma_mu", p.sigma_mu);
  p.mu_sigma = j.value("mu_sigma", p.mu_sigma);
  p.sigma_sigma = j.value("sigma_sigma", p.sigma_sigma);
  p.lambda = j.value("lambda", p.lambda);
  p.seed = j.value("seed", p.seed);
  p.validate();
  return p;
}

inline json gwgm_to_json(const GwgmParams& p) {
  return json{{"nv", p.n_visible},   {"nh", p.n_hidden},       {"mu_mu", p.mu_mu},   {"sigma_mu", p.sigma_mu},
              {"mu_sigma", p.mu_sigma}, {"sigma_sigma", p.sigma_sigma}, {"lambda", p.lambda}, {"seed", p.seed}};
}

inline BmsParams bms_from_json(const json& j) {
  BmsParams p;
  p.seed = j.value("seed", std::uint64_t{0});
  for (const auto& blk : j.at("blocks")) {
    p.blocks.push_back(gwgm_from_json(blk));
  }
  if (p.blocks.empty()) {
    throw Error("bms instance needs at least one block");
  }
  return p;
}

/// A solved-for problem: the model plus whatever is known about it.
struct Instance {
  std::string id;
  RbmModel model;
  std::optional<std::vector<RbmModel>> blocks;
  std::optional<BinaryDataset> dataset;
  std::optional<int> epoch;
};

struct SweepPlan {
  std::vector<Instance> instances;
  std::vector<StrategySpec> strategies;
  std::int64_t n_beta = 1024;
  std::int64_t n_samples = 1024;
  std::uint64_t seed = 0;
  bool exact = true;
  int max_enum_bits = 26;
  unsigned workers = 0;
  /// Notes carried into the report (e.g. grid-count mismatches).
  std::vector<std::string> annotations;

  void validate() const {
    if (instances.empty() || strategies.empty()) {
      throw Error("sweep plan needs at least one instance and one strategy");
    }
    for (const auto& s : strategies) {
      s.validate();
    }
  }
};

/// Builds a plan from its JSON document. Relative file paths resolve
/// against `base_dir`.
inline SweepPlan plan_from_json(const json& doc, const std::filesystem::path& base_dir = {}) {
  detail::expect_format(doc, kPlanFormat);
  SweepPlan plan;
  plan.seed = doc.value("seed", std::uint64_t{0});
  if (doc.contains("ais")) {
    plan.n_beta = doc["ais"].value("n_beta", plan.n_beta);
    plan.n_samples = doc["ais"].value("n_samples", plan.n_samples);
  }
  plan.exact = doc.value("exact", true);
  plan.max_enum_bits = doc.value("max_enum_bits", 26);
  plan.workers = doc.value("workers", 0u);
  const bool transpose_variants = doc.value("transpose_variants", false);

  auto resolve = [&](const std::string& p) {
    const std::filesystem::path q(p);
    return q.is_absolute() ? q : base_dir / q;
  };

  for (const auto& inst : doc.at("instances")) {
    const auto id = inst.at("id").get<std::string>();
    std::optional<BinaryDataset> data;
    if (inst.contains("dataset")) {
      data = load_zbd(resolve(inst["dataset"].get<std::string>()));
    }
    std::optional<int> epoch;
    if (inst.contains("epoch")) {
      epoch = inst["epoch"].get<int>();
    }
    const int replicas = inst.value("replicas", 1);
    for (int r = 0; r < replicas; ++r) {
      const std::string rid = replicas > 1 ? id + "-" + std::to_string(r) : id;
      if (inst.contains("weights")) {
        plan.instances.push_back(
            Instance{rid, load_model(resolve(inst["weights"].get<std::string>())), std::nullopt, data, epoch});
      } else if (inst.contains("gwgm")) {
        GwgmParams p = gwgm_from_json(inst["gwgm"]);
        if (replicas > 1) {
          p.seed = derive_seed(p.seed, r);
        }
        plan.instances.push_back(Instance{rid, generate_gwgm(p), std::nullopt, data, epoch});
      } else if (inst.contains("bms")) {
        BmsParams p = bms_from_json(inst["bms"]);
        if (replicas > 1) {
          p.seed = derive_seed(p.seed, r);
        }
        BmsInstance bms = generate_bms(p);
        plan.instances.push_back(Instance{rid, std::move(bms.model), std::move(bms.blocks), data, epoch});
      } else {
        throw Error("instance '" + id + "' needs one of weights, gwgm, bms");
      }
    }
  }

  std::vector<StrategySpec> specs;
  for (const auto& s : doc.at("strategies")) {
    if (s.is_string()) {
      specs.push_back(parse_preset(s.get<std::string>()));
    } else if (s.contains("grid")) {
      const auto grid = s["grid"].get<std::string>();
      const bool t = s.value("transpose", false);
      GridResolution res;
      if (grid == "full-gwgm") {
        res = resolve_parameter_grid(FlipFamily::Fractional, t);
      } else if (grid == "full-rbm") {
        res = resolve_parameter_grid(FlipFamily::Absolute, t);
      } else {
        throw Error("unknown grid '" + grid + "'");
      }
      if (!res.matches()) {
        plan.annotations.push_back(res.warning(grid));
      }
      specs.insert(specs.end(), res.specs.begin(), res.specs.end());
    } else {
      specs.push_back(spec_from_json(s));
    }
  }
  for (const auto& s : specs) {
    plan.strategies.push_back(s);
    if (transpose_variants && !s.transpose) {
      StrategySpec t = s;
      t.transpose = true;
      plan.strategies.push_back(t);
    }
  }
  plan.validate();
  return plan;
}

inline SweepPlan load_plan(const std::filesystem::path& path) {
  try {
    return plan_from_json(detail::read_json_file(path), path.parent_path());
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

// ---- rows and reports -----------------------------------------------------------

struct ReportRow {
  std::string instance;
  std::optional<int> epoch;
  std::string strategy;
  std::string sampler;
  std::string init;
  int samples = 0;
  int steps = 0;
  std::string flips;
  double epsilon = 0.0;
  bool transpose = false;
  std::int64_t n_beta = 0;
  std::int64_t n_samples = 0;
  std::uint64_t base_seed = 0;
  std::uint64_t ais_seed = 0;
  std::optional<double> log_z0;
  std::optional<double> log_z_ais;
  std::optional<double> log_z_exact;
  std::optional<double> sample_mean;
  std::optional<double> sample_std;
  std::string error;

  /// Recomputed from the stored logs on every call.
  std::optional<double> xi() const {
    if (!log_z_exact || !log_z_ais || *log_z_exact == 0.0) {
      return std::nullopt;
    }
    return relative_difference_xi(*log_z_exact, *log_z_ais);
  }

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct SweepReport {
  std::vector<ReportRow> rows;
  std::vector<std::string> annotations;
  double xi_threshold = kXiThreshold;
  /// Wall time per row, in row order. Kept out of the report files so that
  /// reruns are byte-identical.
  std::vector<double> seconds;

  bool any_error() const {
    return std::any_of(rows.begin(), rows.end(), [](const ReportRow& r) { return !r.error.empty(); });
  }
};

/// Seeds for one (instance, strategy) cell, independent of grid order.
inline std::pair<std::uint64_t, std::uint64_t> row_seeds(std::uint64_t master, const std::string& instance,
                                                          const std::string& strategy) {
  const std::uint64_t row = derive_seed(master, fnv1a64(instance), fnv1a64(strategy));
  return {derive_seed(row, 0), derive_seed(row, 1)};
}

/// Orders rows by xi, largest first; rows without xi keep their relative
/// order after those with one.
inline void sort_rows_by_xi(std::vector<ReportRow>& rows, std::vector<double>* seconds = nullptr) {
  std::vector<std::size_t> idx(rows.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const auto xa = rows[a].xi();
    const auto xb = rows[b].xi();
    if (xa && xb) return *xa > *xb;
    return xa.has_value() && !xb.has_value();
  });
  std::vector<ReportRow> sorted;
  std::vector<double> secs;
  for (std::size_t i : idx) {
    sorted.push_back(std::move(rows[i]));
    if (seconds) secs.push_back((*seconds)[i]);
  }
  rows = std::move(sorted);
  if (seconds) *seconds = std::move(secs);
}

/// Runs every (instance, strategy) pair: build B, run AIS, attach the exact
/// value when one is computable. A failing row records its error and the
/// sweep continues.
inline SweepReport run_sweep(const SweepPlan& plan) {
  plan.validate();
  const std::size_t n_inst = plan.instances.size();
  std::vector<std::optional<double>> exact(n_inst);
  std::vector<std::string> exact_error(n_inst);
  if (plan.exact) {
    for (std::size_t i = 0; i < n_inst; ++i) {
      const Instance& inst = plan.instances[i];
      try {
        exact[i] = inst.blocks ? exact_log_z_block(*inst.blocks, plan.max_enum_bits, plan.workers)
                               : exact_log_z(inst.model, plan.max_enum_bits, plan.workers).log_z;
      } catch (const EnumerationBudgetError&) {
        // Too large to enumerate: the rows simply carry no exact value.
      }
    }
  }

  const std::size_t n_jobs = n_inst * plan.strategies.size();
  const unsigned workers = plan.workers == 0 ? default_workers() : plan.workers;
  const unsigned inner = n_jobs >= workers ? 1u : workers;
  SweepReport report;
  report.annotations = plan.annotations;
  report.rows.resize(n_jobs);
  report.seconds.resize(n_jobs);

  parallel_for(n_jobs, workers, [&](std::size_t job) {
    const Instance& inst = plan.instances[job / plan.strategies.size()];
    const StrategySpec& spec = plan.strategies[job % plan.strategies.size()];
    ReportRow& row = report.rows[job];
    row.instance = inst.id;
    row.epoch = inst.epoch;
    row.strategy = spec.name();
    row.sampler = to_string(spec.sampler);
    row.init = to_string(spec.init);
    row.samples = spec.n_samples;
    row.steps = spec.n_steps;
    row.flips = spec.flips.str();
    row.epsilon = spec.epsilon;
    row.transpose = spec.transpose;
    row.n_beta = plan.n_beta;
    row.n_samples = plan.n_samples;
    std::tie(row.base_seed, row.ais_seed) = row_seeds(plan.seed, inst.id, row.strategy);
    row.log_z_exact = exact[job / plan.strategies.size()];
    const auto start = std::chrono::steady_clock::now();
    try {
      const BaseDistribution base =
          build_base(inst.model, spec, row.base_seed, inst.dataset ? &*inst.dataset : nullptr);
      AisConfig cfg;
      cfg.n_beta = plan.n_beta;
      cfg.n_samples = plan.n_samples;
      cfg.seed = row.ais_seed;
      cfg.workers = inner;
      const AisResult res = run_ais(target_model(inst.model, spec), base, cfg);
      row.log_z0 = res.log_z0;
      row.log_z_ais = res.log_z_ais;
      row.sample_mean = res.sample_mean;
      row.sample_std = res.sample_std;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    report.seconds[job] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  sort_rows_by_xi(report.rows, &report.seconds);
  return report;
}

/// Long AIS run from the dataset-means base: the reference procedure used
/// when no exact value is available.
inline AisResult run_reference(const RbmModel& model, const BinaryDataset& data, std::int64_t n_beta = 1 << 20,
                               std::int64_t n_samples = 1024, std::uint64_t seed = 0, double epsilon = 0.05,
                               unsigned workers = 0) {
  const BaseDistribution base = build_base(model, StrategySpec::dataset(epsilon), seed, &data);
  AisConfig cfg;
  cfg.n_beta = n_beta;
  cfg.n_samples = n_samples;
  cfg.seed = seed;
  cfg.workers = workers;
  return run_ais(model, base, cfg);
}

// ---- CSV / JSON ----------------------------------------------------------------

inline const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols{
      "instance", "epoch",     "strategy",  "sampler",   "init",        "samples",     "steps",
      "flips",    "epsilon",   "transpose", "n_beta",    "n_samples",   "base_seed",   "ais_seed",
      "log_z0",   "log_z_ais", "log_z_exact", "xi",      "sample_mean", "sample_std",  "error"};
  return cols;
}

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt_opt(const std::optional<double>& v) { return v ? fmt_double(*v) : std::string(); }

inline std::optional<double> parse_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

/// Splits CSV text into records (RFC 4180 quoting).
inline std::vector<std::vector<std::string>> csv_parse(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    if (ch == '"') {
      quoted = true;
      any = true;
    } else if (ch == ',') {
      record.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (ch == '\n') {
      record.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(record));
      record.clear();
      any = false;
    } else if (ch != '\r') {
      field += ch;
      any = true;
    }
  }
  if (any) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

inline std::vector<std::string> row_fields(const ReportRow& r) {
  return {r.instance,
          r.epoch ? std::to_string(*r.epoch) : std::string(),
          r.strategy,
          r.sampler,
          r.init,
          std::to_string(r.samples),
          std::to_string(r.steps),
          r.flips,
          fmt_double(r.epsilon),
          r.transpose ? "1" : "0",
          std::to_string(r.n_beta),
          std::to_string(r.n_samples),
          std::to_string(r.base_seed),
          std::to_string(r.ais_seed),
          fmt_opt(r.log_z0),
          fmt_opt(r.log_z_ais),
          fmt_opt(r.log_z_exact),
          fmt_opt(r.xi()),
          fmt_opt(r.sample_mean),
          fmt_opt(r.sample_std),
          r.error};
}

inline ReportRow row_from_fields(const std::vector<std::string>& f) {
  if (f.size() != report_columns().size()) {
    throw IoError("report row has " + std::to_string(f.size()) + " fields, expected " +
                  std::to_string(report_columns().size()));
  }
  ReportRow r;
  r.instance = f[0];
  if (!f[1].empty()) r.epoch = std::stoi(f[1]);
  r.strategy = f[2];
  r.sampler = f[3];
  r.init = f[4];
  r.samples = std::stoi(f[5]);
  r.steps = std::stoi(f[6]);
  r.flips = f[7];
  r.epsilon = std::stod(f[8]);
  r.transpose = f[9] == "1";
  r.n_beta = std::stoll(f[10]);
  r.n_samples = std::stoll(f[11]);
  r.base_seed = std::stoull(f[12]);
  r.ais_seed = std::stoull(f[13]);
  r.log_z0 = parse_opt(f[14]);
  r.log_z_ais = parse_opt(f[15]);
  r.log_z_exact = parse_opt(f[16]);
  // f[17] (xi) is derived and recomputed on output.
  r.sample_mean = parse_opt(f[18]);
  r.sample_std = parse_opt(f[19]);
  r.error = f[20];
  return r;
}

inline json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline std::optional<double> opt_from_json(const json& j) {
  return j.is_null() ? std::nullopt : std::optional<double>(j.get<double>());
}

}  // namespace detail

inline std::string report_to_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  const auto& cols = report_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out << (i ? "," : "") << cols[i];
  }
  out << '\n';
  for (const auto& r : rows) {
    const auto fields = detail::row_fields(r);
    for (std::size_t i = 0; i < fields.size(); ++i) {
      out << (i ? "," : "") << detail::csv_quote(fields[i]);
    }
    out << '\n';
  }
  return out.str();
}

inline std::vector<ReportRow> report_from_csv(const std::string& text) {
  auto records = detail::csv_parse(text);
  if (records.empty() || records.front() != report_columns()) {
    throw IoError("report CSV header does not match the expected columns");
  }
  std::vector<ReportRow> rows;
  for (std::size_t i = 1; i < records.size(); ++i) {
    rows.push_back(detail::row_from_fields(records[i]));
  }
  return rows;
}

inline json report_to_json(const SweepReport& rep) {
  json rows = json::array();
  for (const auto& r : rep.rows) {
    rows.push_back(json{{"instance", r.instance},
                        {"epoch", r.epoch ? json(*r.epoch) : json(nullptr)},
                        {"strategy", r.strategy},
                        {"sampler", r.sampler},
                        {"init", r.init},
                        {"samples", r.samples},
                        {"steps", r.steps},
                        {"flips", r.flips},
                        {"epsilon", r.epsilon},
                        {"transpose", r.transpose},
                        {"n_beta", r.n_beta},
                        {"n_samples", r.n_samples},
                        {"base_seed", r.base_seed},
                        {"ais_seed", r.ais_seed},
                        {"log_z0", detail::opt_json(r.log_z0)},
                        {"log_z_ais", detail::opt_json(r.log_z_ais)},
                        {"log_z_exact", detail::opt_json(r.log_z_exact)},
                        {"xi", detail::opt_json(r.xi())},
                        {"sample_mean", detail::opt_json(r.sample_mean)},
                        {"sample_std", detail::opt_json(r.sample_std)},
                        {"error", r.error}});
  }
  return json{{"format", kReportFormat},
              {"xi_threshold", rep.xi_threshold},
              {"annotations", rep.annotations},
              {"rows", rows}};
}

inline SweepReport report_from_json(const json& doc) {
  detail::expect_format(doc, kReportFormat);
  SweepReport rep;
  rep.xi_threshold = doc.value("xi_threshold", kXiThreshold);
  rep.annotations = doc.value("annotations", std::vector<std::string>{});
  for (const auto& j : doc.at("rows")) {
    ReportRow r;
    r.instance = j.at("instance").get<std::string>();
    if (!j.at("epoch").is_null()) r.epoch = j["epoch"].get<int>();
    r.strategy = j.at("strategy").get<std::string>();
    r.sampler = j.at("sampler").get<std::string>();
    r.init = j.at("init").get<std::string>();
    r.samples = j.at("samples").get<int>();
    r.steps = j.at("steps").get<int>();
    r.flips = j.at("flips").get<std::string>();
    r.epsilon = j.at("epsilon").get<double>();
    r.transpose = j.at("transpose").get<bool>();
    r.n_beta = j.at("n_beta").get<std::int64_t>();
    r.n_samples = j.at("n_samples").get<std::int64_t>();
    r.base_seed = j.at("base_seed").get<std::uint64_t>();
    r.ais_seed = j.at("ais_seed").get<std::uint64_t>();
    r.log_z0 = detail::opt_from_json(j.at("log_z0"));
    r.log_z_ais = detail::opt_from_json(j.at("log_z_ais"));
    r.log_z_exact = detail::opt_from_json(j.at("log_z_exact"));
    r.sample_mean = detail::opt_from_json(j.at("sample_mean"));
    r.sample_std = detail::opt_from_json(j.at("sample_std"));
    r.error = j.at("error").get<std::string>();
    rep.rows.push_back(std::move(r));
  }
  return rep;
}

struct SeriesPoint {
  std::string series;
  double x = 0.0;
  double xi = 0.0;
};

/// One series per strategy. Instances with an epoch are plotted against it
/// (ascending); otherwise x is the experiment index after sorting by xi,
/// largest first. Rows without xi are left out.
inline std::vector<SeriesPoint> plot_series(const std::vector<ReportRow>& rows) {
  std::map<std::string, std::vector<const ReportRow*>> by_strategy;
  std::vector<std::string> order;
  for (const auto& r : rows) {
    if (!r.xi()) continue;
    auto [it, inserted] = by_strategy.try_emplace(r.strategy);
    if (inserted) order.push_back(r.strategy);
    it->second.push_back(&r);
  }
  std::vector<SeriesPoint> out;
  for (const auto& name : order) {
    auto pts = by_strategy[name];
    const bool by_epoch = std::all_of(pts.begin(), pts.end(), [](const ReportRow* r) { return r->epoch.has_value(); });
    if (by_epoch) {
      std::stable_sort(pts.begin(), pts.end(), [](const ReportRow* a, const ReportRow* b) { return *a->epoch < *b->epoch; });
    } else {
      std::stable_sort(pts.begin(), pts.end(), [](const ReportRow* a, const ReportRow* b) { return *a->xi() > *b->xi(); });
    }
    for (std::size_t k = 0; k < pts.size(); ++k) {
      out.push_back({name, by_epoch ? static_cast<double>(*pts[k]->epoch) : static_cast<double>(k + 1), *pts[k]->xi()});
    }
  }
  return out;
}

inline std::string series_to_csv(const std::vector<SeriesPoint>& pts) {
  std::ostringstream out;
  out << "series,x,xi\n";
  for (const auto& p : pts) {
    out << detail::csv_quote(p.series) << ',' << detail::fmt_double(p.x) << ',' << detail::fmt_double(p.xi) << '\n';
  }
  return out.str();
}

namespace detail {

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  out << text;
}

}  // namespace detail

/// Writes report.csv and report.json (deterministic), timings.csv, and
/// plot_data.csv when requested.
inline void write_report(const SweepReport& rep, const std::filesystem::path& dir, bool plot_data = false) {
  std::filesystem::create_directories(dir);
  detail::write_text(dir / "report.csv", report_to_csv(rep.rows));
  detail::write_text(dir / "report.json", report_to_json(rep).dump(2) + "\n");
  std::ostringstream t;
  t << "instance,strategy,seconds\n";
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    t << detail::csv_quote(rep.rows[i].instance) << ',' << detail::csv_quote(rep.rows[i].strategy) << ','
      << (i < rep.seconds.size() ? rep.seconds[i] : 0.0) << '\n';
  }
  detail::write_text(dir / "timings.csv", t.str());
  if (plot_data) {
    detail::write_text(dir / "plot_data.csv", series_to_csv(plot_series(rep.rows)));
  }
}

}  // namespace zest

#endif  // ZEST_HARNESS_HPP

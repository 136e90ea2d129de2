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


#include "zest/harness.hpp"

#include <gtest/gtest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace zest {
namespace {

namespace fs = std::filesystem;

TEST(Grid, FractionalFamilyCountIsFlagged) {
  const auto g = resolve_parameter_grid(FlipFamily::Fractional);
  EXPECT_EQ(g.specs.size(), 300u);
  EXPECT_EQ(g.expected, 325u);
  EXPECT_FALSE(g.matches());
  EXPECT_EQ(g.warning("full-gwgm"), "grid full-gwgm resolved 300 strategies; expected 325");
  std::set<std::string> names;
  int gibbs = 0;
  for (const auto& s : g.specs) {
    names.insert(s.name());
    gibbs += s.sampler == Sampler::Gibbs ? 1 : 0;
    EXPECT_EQ(s.n_samples, 1024);
    EXPECT_FALSE(s.transpose);
  }
  EXPECT_EQ(names.size(), 300u);
  EXPECT_EQ(gibbs, 60);
}

TEST(Grid, AbsoluteFamilyAndTranspose) {
  const auto g = resolve_parameter_grid(FlipFamily::Absolute, true);
  EXPECT_EQ(g.specs.size(), 220u);
  for (const auto& s : g.specs) EXPECT_TRUE(s.transpose);
}

TEST(Presets, Parse) {
  EXPECT_EQ(parse_preset("uniform"), StrategySpec::uniform());
  EXPECT_EQ(parse_preset("gibbs-ps"), StrategySpec::gibbs_ps());
  auto t = StrategySpec::gibbs_mf();
  t.transpose = true;
  EXPECT_EQ(parse_preset("gibbs-mf+T"), t);
  EXPECT_THROW(parse_preset("gibbs"), Error);
}

json small_plan_doc() {
  return json{{"format", "zest-sweep-v1"},
              {"seed", 17},
              {"ais", {{"n_beta", 64}, {"n_samples", 32}}},
              {"instances",
               {{{"id", "g"},
                 {"replicas", 2},
                 {"gwgm", {{"nv", 6}, {"nh", 5}, {"mu_mu", 0.0}, {"sigma_mu", 0.5}, {"mu_sigma", 1.0},
                           {"sigma_sigma", 0.2}, {"lambda", 0.5}, {"seed", 3}}}},
                {{"id", "b"},
                 {"bms",
                  {{"seed", 4},
                   {"blocks", {{{"nv", 3}, {"nh", 4}, {"mu_sigma", 1.0}}, {{"nv", 4}, {"nh", 2}, {"mu_sigma", 1.0}}}}}}}}},
              {"strategies",
               {"uniform", "dataset", {{"sampler", "gibbs"}, {"init", "mf"}, {"samples", 16}, {"steps", 2}}}}};
}

TEST(Plan, FromJson) {
  auto doc = small_plan_doc();
  doc["transpose_variants"] = true;
  const auto plan = plan_from_json(doc);
  ASSERT_EQ(plan.instances.size(), 3u);
  EXPECT_EQ(plan.instances[0].id, "g-0");
  EXPECT_EQ(plan.instances[1].id, "g-1");
  EXPECT_FALSE(plan.instances[0].model == plan.instances[1].model);
  EXPECT_TRUE(plan.instances[2].blocks.has_value());
  EXPECT_EQ(plan.strategies.size(), 6u);
  EXPECT_TRUE(plan.strategies[1].transpose);
  EXPECT_EQ(plan.n_beta, 64);
  EXPECT_TRUE(plan.annotations.empty());

  doc = small_plan_doc();
  doc["strategies"] = json::array({json{{"grid", "full-gwgm"}}});
  const auto grid = plan_from_json(doc);
  EXPECT_EQ(grid.strategies.size(), 300u);
  ASSERT_EQ(grid.annotations.size(), 1u);

  doc["format"] = "zest-sweep-v0";
  EXPECT_THROW(plan_from_json(doc), IoError);
  doc = small_plan_doc();
  doc["strategies"] = json::array({"nope"});
  EXPECT_THROW(plan_from_json(doc), Error);
}

std::string csv_of(const SweepReport& r) { return report_to_csv(r.rows); }

TEST(Sweep, RowsErrorsAndExactValues) {
  auto plan = plan_from_json(small_plan_doc());
  plan.workers = 1;
  const auto rep = run_sweep(plan);
  ASSERT_EQ(rep.rows.size(), 9u);
  EXPECT_TRUE(rep.any_error());
  int errors = 0;
  for (const auto& r : rep.rows) {
    ASSERT_TRUE(r.log_z_exact.has_value());
    if (r.sampler == "dataset") {
      EXPECT_FALSE(r.error.empty());
      EXPECT_FALSE(r.log_z_ais.has_value());
      ++errors;
    } else {
      EXPECT_TRUE(r.error.empty()) << r.error;
      EXPECT_TRUE(r.xi().has_value());
      EXPECT_LT(*r.xi(), 0.2);
    }
    if (r.instance == "b") {
      EXPECT_NEAR(*r.log_z_exact, exact_log_z(plan.instances[2].model).log_z, 1e-10);
    }
  }
  EXPECT_EQ(errors, 3);
  // Sorted by xi, rows without one last.
  for (std::size_t i = 1; i < 6; ++i) EXPECT_GE(*rep.rows[i - 1].xi(), *rep.rows[i].xi());
  EXPECT_FALSE(rep.rows.back().xi().has_value());
}

TEST(Sweep, IndependentOfWorkers) {
  auto plan = plan_from_json(small_plan_doc());
  plan.workers = 1;
  const auto a = run_sweep(plan);
  plan.workers = 3;
  const auto b = run_sweep(plan);
  EXPECT_EQ(a.rows, b.rows);
  EXPECT_EQ(csv_of(a), csv_of(b));
  EXPECT_EQ(report_to_json(a).dump(), report_to_json(b).dump());
}

TEST(Sweep, SeedsDependOnCellNotOrder) {
  EXPECT_EQ(row_seeds(1, "a", "uniform"), row_seeds(1, "a", "uniform"));
  EXPECT_NE(row_seeds(1, "a", "uniform"), row_seeds(1, "b", "uniform"));
  EXPECT_NE(row_seeds(1, "a", "uniform").first, row_seeds(1, "a", "uniform").second);
}

TEST(Sweep, OverBudgetInstanceHasNoExactValue) {
  auto plan = plan_from_json(small_plan_doc());
  plan.max_enum_bits = 2;
  plan.strategies = {StrategySpec::uniform()};
  const auto rep = run_sweep(plan);
  for (const auto& r : rep.rows) {
    EXPECT_FALSE(r.log_z_exact.has_value());
    EXPECT_TRUE(r.log_z_ais.has_value());
  }
}

ReportRow sample_row(std::string inst, double exact, double ais) {
  ReportRow r;
  r.instance = std::move(inst);
  r.strategy = "gibbs/mf/s1024/k100/e0.05";
  r.sampler = "gibbs";
  r.init = "mf";
  r.samples = 1024;
  r.steps = 100;
  r.flips = "1";
  r.epsilon = 0.05;
  r.n_beta = 1024;
  r.n_samples = 1024;
  r.base_seed = 18446744073709551615ull;
  r.ais_seed = 3;
  r.log_z0 = 0.1 + 0.2;
  r.log_z_ais = ais;
  r.log_z_exact = exact;
  r.sample_mean = 1.0 / 3.0;
  r.sample_std = 2.0;
  return r;
}

TEST(Report, CsvAndJsonRoundTrip) {
  SweepReport rep;
  rep.rows.push_back(sample_row("a", 10.0, 9.0));
  auto odd = sample_row("with,comma \"quoted\"", 5.0, 5.5);
  odd.epoch = 7;
  odd.error = "line one\nline two";
  odd.log_z_ais.reset();
  rep.rows.push_back(odd);
  rep.annotations = {"note"};
  const auto csv = report_to_csv(rep.rows);
  const auto back = report_from_csv(csv);
  EXPECT_EQ(back, rep.rows);
  EXPECT_EQ(report_to_csv(back), csv);
  const auto j = report_from_json(report_to_json(rep));
  EXPECT_EQ(j.rows, rep.rows);
  EXPECT_EQ(j.annotations, rep.annotations);
  EXPECT_EQ(report_to_csv(report_from_json(json::parse(report_to_json(rep).dump())).rows), csv);
  EXPECT_EQ(report_columns().size(), 21u);
  EXPECT_EQ(csv.substr(0, csv.find('\n')).find("instance"), 0u);
}

TEST(Report, XiRecomputed) {
  auto r = sample_row("a", 10.0, 9.0);
  EXPECT_DOUBLE_EQ(*r.xi(), 0.1);
  r.log_z_ais = 10.5;
  EXPECT_DOUBLE_EQ(*r.xi(), 0.05);
  r.log_z_exact.reset();
  EXPECT_FALSE(r.xi().has_value());
}

TEST(Report, PlotSeries) {
  std::vector<ReportRow> rows{sample_row("a", 10.0, 9.9), sample_row("b", 10.0, 9.0), sample_row("c", 10.0, 9.5)};
  auto pts = plot_series(rows);
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts[0].x, 1.0);
  EXPECT_DOUBLE_EQ(pts[0].xi, 0.1);
  EXPECT_NEAR(pts[2].xi, 0.01, 1e-14);
  rows[0].epoch = 30;
  rows[1].epoch = 10;
  rows[2].epoch = 20;
  pts = plot_series(rows);
  EXPECT_EQ(pts[0].x, 10.0);
  EXPECT_EQ(pts[2].x, 30.0);
  EXPECT_EQ(series_to_csv(pts).substr(0, 12), "series,x,xi\n");
}

TEST(Report, WriteFiles) {
  const fs::path dir = fs::temp_directory_path() / ("zest_report_" + std::to_string(::getpid()));
  SweepReport rep;
  rep.rows.push_back(sample_row("a", 10.0, 9.0));
  rep.seconds = {1.5};
  write_report(rep, dir, true);
  for (const char* f : {"report.csv", "report.json", "timings.csv", "plot_data.csv"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  std::ifstream in(dir / "report.csv");
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), report_to_csv(rep.rows));
  fs::remove_all(dir);
}

TEST(Reference, UsesDatasetBase) {
  BinaryDataset data(4);
  data.add_row(Eigen::Vector4d(1, 0, 1, 0));
  data.add_row(Eigen::Vector4d(1, 1, 0, 0));
  const auto m = generate_gwgm(GwgmParams{4, 3, 0.0, 0.3, 1.0, 0.1, 0.5, 2});
  const auto r = run_reference(m, data, 256, 64, 5, 0.05, 1);
  EXPECT_NEAR(r.log_z_ais, exact_log_z(m).log_z, 0.05);
  const auto base = build_base(m, StrategySpec::dataset(0.05), 0, &data);
  EXPECT_EQ(r.log_z0, base.log_z0());
}

}  // namespace
}  // namespace zest

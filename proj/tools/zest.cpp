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

// zest: command-line front end for partition-function estimation.

#include "zest/zest.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) {
    throw zest::IoError("cannot write " + out_path);
  }
  out << text;
}

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Strategy from a CLI name: uniform, gibbs-mf, gibbs-ps, dataset:PATH or
/// custom (then sampler and init come from flags).
struct StrategyArgs {
  std::string strategy = "uniform";
  std::string sampler;
  std::string init;
  double epsilon = -1.0;
  int samples = -1;
  int steps = -1;
  std::string flips;
  bool transpose = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--sampler", sampler, "gibbs | metropolis (custom strategy)");
    cmd->add_option("--init", init, "zero | one | bernoulli | mf | ps (custom strategy)");
    cmd->add_option("--epsilon", epsilon, "mean cutoff, in (0, 0.5)");
    cmd->add_option("--samples", samples, "number of averaged samples");
    cmd->add_option("--steps", steps, "sampler steps between samples");
    cmd->add_option("--flips", flips, "Metropolis flips per proposal: N or P%");
  }

  /// Returns the spec and, for dataset:PATH, the dataset path.
  std::pair<zest::StrategySpec, std::string> resolve() const {
    zest::StrategySpec spec;
    std::string data_path;
    if (strategy == "custom") {
      if (sampler.empty()) {
        throw zest::Error("--strategy custom needs --sampler");
      }
      spec.sampler = zest::parse_sampler(sampler);
      if (!init.empty()) spec.init = zest::parse_init(init);
    } else if (strategy.rfind("dataset:", 0) == 0) {
      spec = zest::StrategySpec::dataset();
      data_path = strategy.substr(8);
    } else {
      spec = zest::parse_preset(strategy);
    }
    if (!init.empty()) spec.init = zest::parse_init(init);
    if (epsilon > 0.0) spec.epsilon = epsilon;
    if (samples > 0) spec.n_samples = samples;
    if (steps > 0) spec.n_steps = steps;
    if (!flips.empty()) spec.flips = zest::FlipCount::parse(flips);
    spec.transpose = spec.transpose || transpose;
    spec.validate();
    return {spec, data_path};
  }
};

bool looks_like_strategy(const std::string& s) {
  return s == "uniform" || s == "gibbs-mf" || s == "gibbs-ps" || s == "custom" || s.rfind("dataset:", 0) == 0 ||
         s.ends_with("+T");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zest: partition functions of binary RBMs by annealed importance sampling"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  unsigned workers = 0;
  app.add_option("--workers", workers, "worker threads (0 = all cores)");

  // exact
  auto* exact = app.add_subcommand("exact", "exact log Z by enumeration of the smaller layer");
  std::string weights;
  int max_bits = 26;
  bool as_json = false;
  exact->add_option("--weights", weights, "model JSON")->required();
  exact->add_option("--max-bits", max_bits, "enumeration budget in bits");
  exact->add_flag("--json", as_json, "JSON output");

  // ais
  auto* ais = app.add_subcommand("ais", "AIS estimate of log Z");
  std::string base_arg = "uniform";
  std::int64_t n_beta = 1024;
  std::int64_t n_samples = 1024;
  std::uint64_t seed = 0;
  std::uint64_t base_seed = 0;
  bool transpose = false;
  bool as_csv = false;
  bool no_samples = false;
  std::string out_path;
  StrategyArgs ais_strategy;
  ais->add_option("--weights", weights, "model JSON")->required();
  ais->add_option("--base", base_arg, "uniform | gibbs-mf | gibbs-ps | dataset:PATH | custom | base JSON file");
  ais->add_option("--n-beta", n_beta, "intermediate distributions");
  ais->add_option("--n-samples", n_samples, "AIS chains");
  ais->add_option("--seed", seed, "AIS seed");
  auto* base_seed_opt = ais->add_option("--base-seed", base_seed, "seed for building B (default: --seed)");
  ais->add_flag("--transpose", transpose, "run on the transposed system");
  ais->add_flag("--json", as_json, "JSON output");
  ais->add_flag("--csv", as_csv, "CSV output");
  ais->add_flag("--no-samples", no_samples, "omit raw samples from JSON");
  ais->add_option("-o,--output", out_path, "write output to file");
  ais_strategy.add_to(ais);

  // bias
  auto* bias = app.add_subcommand("bias", "build a base distribution");
  StrategyArgs bias_strategy;
  bias->add_option("--weights", weights, "model JSON")->required();
  bias->add_option("--strategy", bias_strategy.strategy, "uniform | dataset:PATH | gibbs-mf | gibbs-ps | custom");
  bias->add_flag("--transpose", bias_strategy.transpose, "build B for the transposed system");
  bias->add_option("--seed", seed, "sampling seed");
  bias->add_option("-o,--output", out_path, "write JSON to file");
  bias_strategy.add_to(bias);

  // gen
  auto* gen = app.add_subcommand("gen", "generate synthetic instances");
  gen->require_subcommand(1);
  auto* gen_gwgm = gen->add_subcommand("gwgm", "Gaussian weights with Gaussian moments");
  zest::GwgmParams gp;
  gen_gwgm->add_option("--nv", gp.n_visible)->required();
  gen_gwgm->add_option("--nh", gp.n_hidden)->required();
  gen_gwgm->add_option("--mumu", gp.mu_mu);
  gen_gwgm->add_option("--sigmamu", gp.sigma_mu);
  gen_gwgm->add_option("--musigma", gp.mu_sigma);
  gen_gwgm->add_option("--sigmasigma", gp.sigma_sigma);
  gen_gwgm->add_option("--lambda", gp.lambda);
  gen_gwgm->add_option("--seed", gp.seed);
  gen_gwgm->add_option("-o,--output", out_path)->required();
  auto* gen_bms = gen->add_subcommand("bms", "block-diagonal assembly of GWGM blocks");
  std::vector<std::string> block_specs;
  std::uint64_t bms_seed = 0;
  gen_bms->add_option("--block", block_specs, "nv,nh[,mumu,sigmamu,musigma,sigmasigma,lambda] (repeatable)")
      ->required();
  gen_bms->add_option("--seed", bms_seed);
  gen_bms->add_option("-o,--output", out_path)->required();

  // ingest
  auto* ingest = app.add_subcommand("ingest", "convert a dataset to packed .zbd");
  ingest->require_subcommand(1);
  auto* ingest_idx = ingest->add_subcommand("idx", "idx3-ubyte images");
  std::vector<std::string> inputs;
  double threshold = 0.5;
  std::size_t n_features = 0;
  ingest_idx->add_option("--input", inputs, "idx file(s)")->required();
  ingest_idx->add_option("--threshold", threshold, "binarization threshold on pixel/255");
  ingest_idx->add_option("-o,--output", out_path)->required();
  auto* ingest_svm = ingest->add_subcommand("libsvm", "libsvm sparse text, joined");
  ingest_svm->add_option("--input", inputs, "libsvm file(s)")->required();
  ingest_svm->add_option("--features", n_features, "number of features")->required();
  ingest_svm->add_option("-o,--output", out_path)->required();

  // train
  auto* train = app.add_subcommand("train", "CD-k training with epoch snapshots");
  std::string data_path;
  zest::TrainConfig tc;
  std::vector<int> snapshots;
  train->add_option("--data", data_path, ".zbd dataset")->required();
  train->add_option("--hidden", tc.n_hidden);
  train->add_option("--lr", tc.learning_rate);
  train->add_option("--epochs", tc.epochs);
  train->add_option("--batch", tc.batch_size);
  train->add_option("--cd", tc.cd_k);
  train->add_option("--snapshots", snapshots, "epochs to save")->delimiter(',');
  train->add_option("--seed", tc.seed);
  train->add_option("-o,--output", out_path, "output directory")->required();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run a strategy sweep plan");
  std::string plan_path;
  bool plot_data = false;
  sweep->add_option("--plan", plan_path, "plan JSON")->required();
  sweep->add_option("-o,--output", out_path, "output directory")->required();
  sweep->add_flag("--plot-data", plot_data, "also write per-strategy xi series");

  // reference
  auto* reference = app.add_subcommand("reference", "long AIS run from the dataset-means base");
  double ref_eps = 0.05;
  std::int64_t ref_n_beta = std::int64_t{1} << 20;
  reference->add_option("--weights", weights, "model JSON")->required();
  reference->add_option("--data", data_path, ".zbd training set")->required();
  reference->add_option("--n-beta", ref_n_beta, "intermediate distributions (default 2^20)");
  reference->add_option("--n-samples", n_samples, "AIS chains");
  reference->add_option("--epsilon", ref_eps, "mean cutoff");
  reference->add_option("--seed", seed);
  reference->add_flag("--json", as_json);
  reference->add_flag("--no-samples", no_samples);
  reference->add_option("-o,--output", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (exact->parsed()) {
      const auto model = zest::load_model(weights);
      const auto r = zest::exact_log_z(model, max_bits, workers);
      if (as_json) {
        const zest::json doc{{"log_z", r.log_z},
                             {"enumerated_layer", zest::to_string(r.enumerated_layer)},
                             {"states_visited", r.states_visited}};
        std::cout << doc.dump(2) << '\n';
      } else {
        std::cout << fmt12(r.log_z) << '\n';
      }
      return 0;
    }

    if (ais->parsed()) {
      const auto model = zest::load_model(weights);
      const zest::RbmModel target = transpose ? zest::transpose(model) : model;
      std::optional<zest::BaseDistribution> base;
      if (!looks_like_strategy(base_arg) && fs::exists(base_arg)) {
        base = zest::load_base(base_arg);
      } else {
        ais_strategy.strategy = base_arg;
        auto [spec, dpath] = ais_strategy.resolve();
        spec.transpose = false;  // the model is already transposed above
        std::optional<zest::BinaryDataset> data;
        if (!dpath.empty()) data = zest::load_zbd(dpath);
        base = zest::build_base(target, spec, base_seed_opt->count() ? base_seed : seed, data ? &*data : nullptr);
      }
      zest::AisConfig cfg;
      cfg.n_beta = n_beta;
      cfg.n_samples = n_samples;
      cfg.seed = seed;
      cfg.workers = workers;
      const auto r = zest::run_ais(target, *base, cfg);
      std::ostringstream out;
      if (as_json) {
        out << zest::result_to_json(r, !no_samples).dump(2) << '\n';
      } else if (as_csv) {
        out << "log_z_ais,log_z0,sample_mean,sample_std,n_beta,n_samples,seed,wall_seconds\n"
            << zest::detail::fmt_double(r.log_z_ais) << ',' << zest::detail::fmt_double(r.log_z0) << ','
            << zest::detail::fmt_double(r.sample_mean) << ',' << zest::detail::fmt_double(r.sample_std) << ','
            << r.config.n_beta << ',' << r.config.n_samples << ',' << r.config.seed << ',' << r.wall_seconds
            << '\n';
      } else {
        out << "log_z_ais   " << fmt12(r.log_z_ais) << "\nlog_z0      " << fmt12(r.log_z0) << "\nsample_mean "
            << fmt12(r.sample_mean) << "\nsample_std  " << fmt12(r.sample_std) << '\n';
      }
      emit(out.str(), out_path);
      return 0;
    }

    if (bias->parsed()) {
      const auto model = zest::load_model(weights);
      auto [spec, dpath] = bias_strategy.resolve();
      std::optional<zest::BinaryDataset> data;
      if (!dpath.empty()) data = zest::load_zbd(dpath);
      const auto base = zest::build_base(model, spec, seed, data ? &*data : nullptr);
      emit(zest::base_to_json(base, spec).dump(2) + "\n", out_path);
      return 0;
    }

    if (gen_gwgm->parsed()) {
      zest::save_model(zest::generate_gwgm(gp), out_path);
      return 0;
    }

    if (gen_bms->parsed()) {
      zest::BmsParams bp;
      bp.seed = bms_seed;
      for (const auto& s : block_specs) {
        std::vector<double> v;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
        if (v.size() != 2 && v.size() != 7) {
          throw zest::Error("--block expects nv,nh or nv,nh,mumu,sigmamu,musigma,sigmasigma,lambda; got '" + s + "'");
        }
        zest::GwgmParams p;
        p.n_visible = static_cast<Eigen::Index>(v[0]);
        p.n_hidden = static_cast<Eigen::Index>(v[1]);
        if (v.size() == 7) {
          p.mu_mu = v[2];
          p.sigma_mu = v[3];
          p.mu_sigma = v[4];
          p.sigma_sigma = v[5];
          p.lambda = v[6];
        }
        bp.blocks.push_back(p);
      }
      const auto inst = zest::generate_bms(bp);
      zest::save_model(inst.model, out_path);
      zest::json blocks = zest::json::array();
      for (const auto& b : inst.blocks) blocks.push_back(zest::model_to_json(b));
      fs::path sidecar(out_path);
      sidecar.replace_extension(".blocks.json");
      zest::write_json_file(zest::json{{"format", "zest-bms-blocks-v1"}, {"blocks", blocks}}, sidecar);
      return 0;
    }

    if (ingest_idx->parsed()) {
      zest::BinaryDataset all;
      for (std::size_t k = 0; k < inputs.size(); ++k) {
        auto ds = zest::load_idx(inputs[k], threshold);
        if (k == 0) {
          all = std::move(ds);
          continue;
        }
        if (ds.n_features() != all.n_features()) throw zest::DimensionError("idx inputs differ in image size");
        for (std::size_t r = 0; r < ds.n_examples(); ++r) all.add_row(ds.row(r).vector());
      }
      zest::save_zbd(all, out_path);
      std::cout << all.n_examples() << " x " << all.n_features() << '\n';
      return 0;
    }

    if (ingest_svm->parsed()) {
      zest::BinaryDataset all(n_features);
      for (const auto& in : inputs) {
        const auto ds = zest::load_libsvm_binary(in, n_features);
        for (std::size_t r = 0; r < ds.n_examples(); ++r) all.add_row(ds.row(r).vector());
      }
      zest::save_zbd(all, out_path);
      std::cout << all.n_examples() << " x " << all.n_features() << '\n';
      return 0;
    }

    if (train->parsed()) {
      const auto data = zest::load_zbd(data_path);
      tc.snapshot_epochs = snapshots.empty() ? std::vector<int>{tc.epochs} : snapshots;
      fs::create_directories(out_path);
      for (const auto& snap : zest::train_cd(data, tc)) {
        char name[32];
        std::snprintf(name, sizeof name, "epoch_%04d.json", snap.epoch);
        zest::save_model(snap.model, fs::path(out_path) / name);
        std::cout << "epoch " << snap.epoch << " rms " << fmt12(zest::rms_weights(snap.model)) << '\n';
      }
      return 0;
    }

    if (sweep->parsed()) {
      auto plan = zest::load_plan(plan_path);
      if (workers != 0) plan.workers = workers;
      for (const auto& a : plan.annotations) std::cerr << "warning: " << a << '\n';
      const auto report = zest::run_sweep(plan);
      zest::write_report(report, out_path, plot_data);
      std::size_t failed = 0;
      for (const auto& r : report.rows) {
        if (!r.error.empty()) {
          ++failed;
          std::cerr << "row " << r.instance << " / " << r.strategy << " failed: " << r.error << '\n';
        }
      }
      std::cout << report.rows.size() << " rows, " << failed << " failed\n";
      return failed == 0 ? 0 : 1;
    }

    if (reference->parsed()) {
      const auto model = zest::load_model(weights);
      const auto data = zest::load_zbd(data_path);
      const auto r = zest::run_reference(model, data, ref_n_beta, n_samples, seed, ref_eps, workers);
      if (as_json) {
        emit(zest::result_to_json(r, !no_samples).dump(2) + "\n", out_path);
      } else {
        emit(fmt12(r.log_z_ais) + "\n", out_path);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "zest: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

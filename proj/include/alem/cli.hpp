// Copyright 2026 The ALEM Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Exit codes: 0 success, 2 invalid configuration or
// arguments, 3 runtime failure.

#pragma once

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "alem/al_loop.hpp"
#include "alem/bench.hpp"
#include "alem/config.hpp"
#include "alem/matrix_file.hpp"
#include "alem/metrics.hpp"
#include "alem/oracles.hpp"
#include "alem/report.hpp"

namespace alem::cli {

inline constexpr int kOk = 0;
inline constexpr int kInvalidConfig = 2;
inline constexpr int kRuntimeFailure = 3;

namespace detail {

// Remaining arguments as --key value pairs.
inline void apply_overrides(config::RunConfig& c, const std::vector<std::string>& extra) {
  for (std::size_t i = 0; i < extra.size(); ++i) {
    const std::string& a = extra[i];
    if (a.rfind("--", 0) != 0 || a.size() <= 2) {
      throw config::ConfigError("unexpected argument '" + a + "'");
    }
    std::string key = a.substr(2), value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key.resize(eq);
    } else {
      if (i + 1 >= extra.size()) throw config::ConfigError("flag --" + key + " needs a value");
      value = extra[++i];
    }
    config::set_value(c, key, value);
  }
}

inline int cmd_run(const std::string& path, const std::vector<std::string>& extra,
                   std::ostream& out, std::ostream& err) {
  config::RunConfig cfg;
  try {
    cfg = config::load(path);
    apply_overrides(cfg, extra);
    config::validate(cfg);
  } catch (const std::exception& e) {
    err << "invalid config: " << e.what() << "\n";
    return kInvalidConfig;
  }
  try {
    const std::filesystem::path root(cfg.out_dir);
    std::filesystem::create_directories(root);
    report::write_text(root / "config.ini", config::serialize(cfg));
    for (const auto& strategy : cfg.strategies) {
      for (const auto seed : cfg.seeds) {
        al::ExperimentConfig ec = cfg.experiment;
        ec.strategy = strategy;
        ec.seed = seed;
        const al::RunReport r = al::run_experiment(ec);
        const auto dir = report::run_dir(root, r);
        report::write_run(dir, r);
        const auto& last = r.rounds.back();
        out << strategy.name() << " seed " << seed << ": labeled " << last.labeled_count
            << ", tail1 " << last.tails.tail1 << ", mean " << last.tails.mean << " -> "
            << dir.string() << "\n";
      }
    }
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << "\n";
    return kRuntimeFailure;
  }
  return kOk;
}

inline int cmd_bench(const coreset::BenchConfig& bc, std::ostream& out, std::ostream& err) {
  coreset::BenchReport r;
  try {
    r = coreset::bench_kcenter(bc);
  } catch (const std::invalid_argument& e) {
    err << "invalid benchmark parameters: " << e.what() << "\n";
    return kInvalidConfig;
  }
  const nlohmann::json j = {{"n", bc.n},
                            {"d", bc.d},
                            {"b", bc.b},
                            {"chunk_size", bc.chunk_size},
                            {"check_chunk_size", bc.check_chunk_size},
                            {"workers", bc.workers},
                            {"metric", coreset::metric_name(bc.metric)},
                            {"distance_evaluations", r.distance_evaluations},
                            {"expected_evaluations", r.expected_evaluations},
                            {"wall_s", r.wall_s},
                            {"evaluations_per_s", r.evaluations_per_s},
                            {"points_per_s", r.points_per_s},
                            {"aux_bytes", r.aux_bytes},
                            {"predicted_aux_bytes", r.predicted_aux_bytes},
                            {"cover_radius", r.cover_radius},
                            {"chunk_invariant", r.chunk_invariant}};
  out << j.dump(2) << "\n";
  if (!r.chunk_invariant || r.distance_evaluations != r.expected_evaluations) {
    err << "benchmark self-check failed\n";
    return kRuntimeFailure;
  }
  return kOk;
}

inline nlohmann::json tails_json(const Matrix& pred, const Matrix& truth) {
  if (pred.rows != truth.rows || pred.cols != truth.cols) {
    throw std::invalid_argument("prediction and truth matrices differ in shape");
  }
  std::vector<double> losses(pred.rows);
  for (std::size_t i = 0; i < pred.rows; ++i) losses[i] = nn::l1_loss(pred.row(i), truth.row(i));
  return report::to_json(metrics::tail_report(losses));
}

inline int cmd_eval(const std::string& pred_path, const std::string& truth_path,
                    const std::string& run_dir, std::ostream& out, std::ostream& err) {
  try {
    if (!run_dir.empty()) {
      namespace fs = std::filesystem;
      const auto truth = io::read_matrix((fs::path(run_dir) / "test_truth.alem").string()).matrix;
      nlohmann::json all = nlohmann::json::array();
      for (std::size_t t = 1;; ++t) {
        const auto p = fs::path(run_dir) / "predictions" / ("round_" + std::to_string(t) + ".alem");
        if (!fs::exists(p)) break;
        auto j = tails_json(io::read_matrix(p.string()).matrix, truth);
        j["round"] = t;
        all.push_back(std::move(j));
      }
      if (all.empty()) {
        err << "no predictions found under " << run_dir << "\n";
        return kInvalidConfig;
      }
      out << all.dump(2) << "\n";
      return kOk;
    }
    if (pred_path.empty() || truth_path.empty()) {
      err << "eval needs --run-dir or both --pred and --truth\n";
      return kInvalidConfig;
    }
    const auto pred = io::read_matrix(pred_path).matrix;
    const auto truth = io::read_matrix(truth_path).matrix;
    out << tails_json(pred, truth).dump(2) << "\n";
  } catch (const std::exception& e) {
    err << "eval failed: " << e.what() << "\n";
    return kRuntimeFailure;
  }
  return kOk;
}

inline int cmd_gen_data(const std::string& kind, std::size_t n, std::uint64_t seed,
                        std::uint64_t coefficient_seed, std::size_t output_dim,
                        double noise_sigma, const std::string& prefix, std::ostream& out,
                        std::ostream& err) {
  oracle::OracleSpec spec;
  try {
    spec.kind = oracle::parse_kind(kind);
    spec.output_dim = output_dim;
    spec.coefficient_seed = coefficient_seed;
    spec.noise_sigma = noise_sigma;
    if (n == 0) throw std::invalid_argument("--n must be at least 1");
  } catch (const std::invalid_argument& e) {
    err << "invalid arguments: " << e.what() << "\n";
    return kInvalidConfig;
  }
  try {
    const oracle::Oracle o(spec);
    const Matrix x = oracle::sample_pool(o, n, seed);
    io::write_matrix(prefix + "_x.alem", x);
    io::write_matrix(prefix + "_y.alem", o.query_all(x));
    report::write_text(prefix + "_oracle.txt", o.dump_coefficients());
    out << "wrote " << n << " samples to " << prefix << "_x.alem / " << prefix << "_y.alem\n";
  } catch (const std::exception& e) {
    err << "gen-data failed: " << e.what() << "\n";
    return kRuntimeFailure;
  }
  return kOk;
}

}  // namespace detail

inline int main(int argc, const char* const* argv, std::ostream& out = std::cout,
                std::ostream& err = std::cerr) {
  CLI::App app{"Active-learning toolkit for neural emulators of simulators"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run active-learning experiments from a config file");
  std::string config_path;
  run->add_option("config", config_path, "Config file (sectioned key = value)")->required();
  run->allow_extras();
  run->footer("Any config key can be overridden with --key value or --section.key value.");

  auto* bench = app.add_subcommand("bench-kcenter", "Benchmark greedy k-center selection");
  coreset::BenchConfig bc;
  std::string bench_metric = "l1";
  bench->add_option("--n", bc.n, "Pool size");
  bench->add_option("--d", bc.d, "Feature dimension");
  bench->add_option("--b", bc.b, "Centers to select");
  bench->add_option("--chunk", bc.chunk_size, "Rows per distance chunk");
  bench->add_option("--check-chunk", bc.check_chunk_size, "Chunk size of the invariance re-run");
  bench->add_option("--workers", bc.workers, "Worker threads");
  bench->add_option("--seed", bc.seed, "Feature seed");
  bench->add_option("--metric", bench_metric, "l1 or l2");

  auto* eval = app.add_subcommand("eval", "Recompute tail metrics from stored predictions");
  std::string pred_path, truth_path, eval_dir;
  eval->add_option("--pred", pred_path, "Prediction matrix file");
  eval->add_option("--truth", truth_path, "Ground-truth matrix file");
  eval->add_option("--run-dir", eval_dir, "Run directory written by `run`");

  auto* gen = app.add_subcommand("gen-data", "Sample inputs and emit oracle datasets");
  std::string gen_kind = "power-curve", gen_prefix = "data";
  std::size_t gen_n = 1000, gen_out_dim = 128;
  std::uint64_t gen_seed = 0, gen_coef_seed = 0;
  double gen_noise = 0.0;
  gen->add_option("--oracle", gen_kind, "spectrum-mix or power-curve");
  gen->add_option("--n", gen_n, "Number of samples");
  gen->add_option("--seed", gen_seed, "Input sampling seed");
  gen->add_option("--coefficient-seed", gen_coef_seed, "Oracle coefficient seed");
  gen->add_option("--output-dim", gen_out_dim, "Output grid size");
  gen->add_option("--noise-sigma", gen_noise, "Additive output noise (0 = off)");
  gen->add_option("--out", gen_prefix, "Output file prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kInvalidConfig;
  }

  if (*run) return detail::cmd_run(config_path, run->remaining(), out, err);
  if (*bench) {
    try {
      bc.metric = coreset::parse_metric(bench_metric);
    } catch (const std::invalid_argument& e) {
      err << e.what() << "\n";
      return kInvalidConfig;
    }
    return detail::cmd_bench(bc, out, err);
  }
  if (*eval) return detail::cmd_eval(pred_path, truth_path, eval_dir, out, err);
  return detail::cmd_gen_data(gen_kind, gen_n, gen_seed, gen_coef_seed, gen_out_dim, gen_noise,
                              gen_prefix, out, err);
}

}  // namespace alem::cli

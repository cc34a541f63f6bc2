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

// Run output layout, one directory per (strategy, seed):
//
//   report.json                 every deterministic per-round record
//   rounds.csv                  round, labeled_count, tail1, tail5, tail10,
//                               mean_loss, delta, train_steps
//   timings.csv                 round, wall_time_s, select_s, train_s
//   round_<t>.csv               per-sample test losses
//   plotdata/round_<t>_median.csv, plotdata/round_<t>_worst1.csv
//   predictions/round_<t>.alem, test_inputs.alem, test_truth.alem
//
// Wall-clock figures go only to timings.csv so that every other file is a
// pure function of the configuration.

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "alem/al_loop.hpp"
#include "alem/matrix_file.hpp"
#include "alem/metrics.hpp"
#include "json.hpp"

namespace alem::report {

using nlohmann::json;

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline json to_json(const metrics::TailReport& t) {
  return {{"mean", t.mean},
          {"tail1", t.tail1},
          {"tail5", t.tail5},
          {"tail10", t.tail10},
          {"median_index", t.median_index},
          {"worst_indices", t.worst_indices}};
}

inline json to_json(const metrics::BoundReport& b) {
  return {{"delta", b.delta},
          {"alphas", b.alphas},
          {"lambda_l", b.lambda_l},
          {"lambda_l_uniform", b.lambda_l_uniform},
          {"lambda_eta", b.lambda_eta},
          {"output_bound", b.output_bound},
          {"max_pool_loss", b.max_pool_loss},
          {"loss_cap", b.loss_cap},
          {"gamma", b.gamma},
          {"n", b.n},
          {"hoeffding", b.hoeffding},
          {"v_term_omitted", b.v_term_omitted},
          {"rhs", b.rhs},
          {"lhs", b.lhs},
          {"training_error", b.training_error},
          {"pool_mean", b.pool_mean},
          {"test_mean", b.test_mean},
          {"generalisation_estimate", b.generalisation_estimate}};
}

inline metrics::BoundReport bound_from_json(const json& j) {
  metrics::BoundReport b;
  b.delta = j.at("delta").get<double>();
  b.alphas = j.at("alphas").get<std::vector<double>>();
  b.lambda_l = j.at("lambda_l").get<double>();
  b.lambda_l_uniform = j.at("lambda_l_uniform").get<double>();
  b.lambda_eta = j.at("lambda_eta").get<double>();
  b.output_bound = j.at("output_bound").get<double>();
  b.max_pool_loss = j.at("max_pool_loss").get<double>();
  b.loss_cap = j.at("loss_cap").get<double>();
  b.gamma = j.at("gamma").get<double>();
  b.n = j.at("n").get<std::uint64_t>();
  b.hoeffding = j.at("hoeffding").get<double>();
  b.v_term_omitted = j.at("v_term_omitted").get<bool>();
  b.rhs = j.at("rhs").get<double>();
  b.lhs = j.at("lhs").get<double>();
  b.training_error = j.at("training_error").get<double>();
  b.pool_mean = j.at("pool_mean").get<double>();
  b.test_mean = j.at("test_mean").get<double>();
  b.generalisation_estimate = j.at("generalisation_estimate").get<double>();
  return b;
}

inline json to_json(const al::RunReport& r) {
  json rounds = json::array();
  for (const auto& rec : r.rounds) {
    json jr = {{"round", rec.round},
               {"labeled_count", rec.labeled_count},
               {"selected", rec.selected},
               {"tails", to_json(rec.tails)},
               {"delta", rec.delta},
               {"epochs", rec.epochs},
               {"best_epoch", rec.best_epoch},
               {"train_steps", rec.train_steps},
               {"bound", to_json(rec.bound)},
               {"lipschitz",
                {{"pairs", rec.lipschitz.pairs},
                 {"violations", rec.lipschitz.violations},
                 {"bound", rec.lipschitz.bound},
                 {"max_ratio", rec.lipschitz.max_ratio}}}};
    if (rec.has_selection_delta) {
      jr["selection_delta_before"] = rec.selection_delta_before;
      jr["selection_delta_after"] = rec.selection_delta_after;
    }
    rounds.push_back(std::move(jr));
  }
  return {{"strategy", r.strategy}, {"seed", r.seed}, {"oracle", r.oracle}, {"rounds", rounds}};
}

inline void write_text(const std::filesystem::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << s;
}

inline std::string rounds_csv(const al::RunReport& r) {
  std::string s = "round,labeled_count,tail1,tail5,tail10,mean_loss,delta,train_steps\n";
  for (const auto& rec : r.rounds) {
    s += std::to_string(rec.round) + "," + std::to_string(rec.labeled_count) + "," +
         fmt(rec.tails.tail1) + "," + fmt(rec.tails.tail5) + "," + fmt(rec.tails.tail10) + "," +
         fmt(rec.tails.mean) + "," + fmt(rec.delta) + "," + std::to_string(rec.train_steps) + "\n";
  }
  return s;
}

inline std::string losses_csv(std::span<const double> losses) {
  std::string s = "sample,loss\n";
  for (std::size_t i = 0; i < losses.size(); ++i) s += std::to_string(i) + "," + fmt(losses[i]) + "\n";
  return s;
}

/// (sample, grid_index, t, truth, prediction) rows for the given test samples.
inline std::string plot_csv(const al::RunReport& r, const al::RoundRecord& rec,
                            std::span<const std::size_t> samples) {
  std::string s = "sample,grid_index,t,truth,prediction\n";
  for (std::size_t i : samples) {
    const auto truth = r.test_targets.row(i);
    const auto pred = rec.test_predictions.row(i);
    for (std::size_t j = 0; j < truth.size(); ++j) {
      s += std::to_string(i) + "," + std::to_string(j) + "," + fmt(r.grid.at(j)) + "," +
           fmt(truth[j]) + "," + fmt(pred[j]) + "\n";
    }
  }
  return s;
}

inline std::filesystem::path run_dir(const std::filesystem::path& out, const al::RunReport& r) {
  return out / r.strategy / std::to_string(r.seed);
}

inline void write_run(const std::filesystem::path& dir, const al::RunReport& r) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "plotdata");
  fs::create_directories(dir / "predictions");
  write_text(dir / "report.json", to_json(r).dump(2) + "\n");
  write_text(dir / "rounds.csv", rounds_csv(r));
  std::string timing = "round,wall_time_s,select_s,train_s\n";
  for (const auto& rec : r.rounds) {
    timing += std::to_string(rec.round) + "," + fmt(rec.timing.wall_s) + "," +
              fmt(rec.timing.select_s) + "," + fmt(rec.timing.train_s) + "\n";
  }
  write_text(dir / "timings.csv", timing);
  io::write_matrix((dir / "test_inputs.alem").string(), r.test_inputs);
  io::write_matrix((dir / "test_truth.alem").string(), r.test_targets);
  for (const auto& rec : r.rounds) {
    const std::string t = std::to_string(rec.round);
    write_text(dir / ("round_" + t + ".csv"), losses_csv(rec.test_losses));
    const std::size_t median[] = {rec.tails.median_index};
    write_text(dir / "plotdata" / ("round_" + t + "_median.csv"), plot_csv(r, rec, median));
    write_text(dir / "plotdata" / ("round_" + t + "_worst1.csv"), plot_csv(r, rec, rec.tails.worst_indices));
    io::write_matrix((dir / "predictions" / ("round_" + t + ".alem")).string(), rec.test_predictions);
  }
}

}  // namespace alem::report

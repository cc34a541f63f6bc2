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

// Pool-based active-learning driver: select -> query -> (re)initialize ->
// train -> evaluate, for T rounds with per-round budgets.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "alem/coreset.hpp"
#include "alem/matrix.hpp"
#include "alem/metrics.hpp"
#include "alem/nn.hpp"
#include "alem/oracles.hpp"
#include "alem/rng.hpp"
#include "alem/warmstart.hpp"

namespace alem::al {

enum class Selector { Random, CoreSet };

struct Strategy {
  Selector selector = Selector::Random;
  bool warm_start = false;  // shrink-and-perturb between rounds; cold otherwise

  std::string name() const {
    std::string s = selector == Selector::Random ? "random" : "coreset";
    return warm_start ? s + "-sp" : s;
  }
  static Strategy parse(const std::string& s) {
    if (s == "random") return {Selector::Random, false};
    if (s == "random-sp") return {Selector::Random, true};
    if (s == "coreset") return {Selector::CoreSet, false};
    if (s == "coreset-sp") return {Selector::CoreSet, true};
    throw std::invalid_argument("unknown strategy '" + s +
                                "' (expected random, random-sp, coreset or coreset-sp)");
  }
  bool operator==(const Strategy&) const = default;
};

class BudgetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BudgetSchedule {
  std::vector<std::size_t> budgets;

  std::size_t rounds() const { return budgets.size(); }
  std::size_t total() const {
    return std::accumulate(budgets.begin(), budgets.end(), std::size_t{0});
  }
  void validate(std::size_t pool_size) const {
    if (budgets.empty()) throw BudgetError("budget schedule has no rounds");
    for (std::size_t b : budgets) {
      if (b == 0) throw BudgetError("every round budget must be at least 1");
    }
    if (total() > pool_size) {
      throw BudgetError("total budget " + std::to_string(total()) +
                                  " exceeds pool size " + std::to_string(pool_size));
    }
  }
  bool operator==(const BudgetSchedule&) const = default;
};

/// Labeled pool indices by round, with their oracle outputs.
class LabeledSet {
 public:
  explicit LabeledSet(std::size_t pool_size) : taken_(pool_size, 0) {}

  void add_round(std::span<const std::size_t> indices, const Matrix& pool,
                 const oracle::Oracle& oracle) {
    for (std::size_t i : indices) {
      if (i >= taken_.size()) throw std::out_of_range("pool index out of range");
      if (taken_[i]) throw std::invalid_argument("pool index " + std::to_string(i) + " is already labeled");
    }
    rounds_.emplace_back(indices.begin(), indices.end());
    for (std::size_t i : indices) {
      taken_[i] = 1;
      indices_.push_back(i);
      data_.append(pool.row(i), oracle.query(pool.row(i)));
    }
  }

  const std::vector<std::vector<std::size_t>>& rounds() const { return rounds_; }
  const std::vector<std::size_t>& indices() const { return indices_; }
  const Dataset& data() const { return data_; }
  std::size_t size() const { return indices_.size(); }
  bool contains(std::size_t i) const { return taken_.at(i) != 0; }

  /// Unlabeled pool indices, ascending.
  std::vector<std::size_t> remaining() const {
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < taken_.size(); ++i) {
      if (!taken_[i]) r.push_back(i);
    }
    return r;
  }

 private:
  std::vector<char> taken_;
  std::vector<std::vector<std::size_t>> rounds_;
  std::vector<std::size_t> indices_;
  Dataset data_;
};

/// Uniform sample of b indices without replacement, in draw order.
inline std::vector<std::size_t> select_random(std::span<const std::size_t> remaining,
                                              std::size_t b, std::uint64_t seed) {
  if (b > remaining.size()) {
    throw BudgetError("cannot draw " + std::to_string(b) + " from " +
                      std::to_string(remaining.size()) + " remaining points");
  }
  std::vector<std::size_t> v(remaining.begin(), remaining.end());
  Rng rng(derive_seed(seed, "select_random"));
  for (std::size_t i = 0; i < b; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(v.size() - i));
    std::swap(v[i], v[j]);
  }
  v.resize(b);
  return v;
}

struct CoresetOptions {
  coreset::Metric metric = coreset::Metric::L1;
  bool standardize = false;
  std::size_t chunk_size = 4096;
  std::size_t workers = 1;
  bool operator==(const CoresetOptions&) const = default;
};

struct CoresetSelection {
  std::vector<std::size_t> indices;
  /// Cover radius of the pool in output space before and after adding the
  /// new centers, both with the same network.
  double delta_before = 0.0;
  double delta_after = 0.0;
};

/// k-center selection in model-output space: labeled points are the initial
/// centers and b remaining points are added greedily.
inline CoresetSelection select_coreset(const nn::Net& net, const Matrix& pool,
                                       std::span<const std::size_t> remaining,
                                       std::span<const std::size_t> labeled, std::size_t b,
                                       const CoresetOptions& opt = {}) {
  if (b > remaining.size()) {
    throw BudgetError("cannot select " + std::to_string(b) + " from " +
                      std::to_string(remaining.size()) + " remaining points");
  }
  // Local rows: labeled first, then remaining in ascending pool order, so the
  // lowest-local-index tie-break is the lowest-pool-index tie-break.
  std::vector<std::size_t> local(labeled.begin(), labeled.end());
  std::vector<std::size_t> rem(remaining.begin(), remaining.end());
  std::sort(rem.begin(), rem.end());
  local.insert(local.end(), rem.begin(), rem.end());
  if (local.empty()) return {};

  Matrix feats(local.size(), net.output_dim());
  nn::Workspace ws;
  for (std::size_t r = 0; r < local.size(); ++r) {
    const auto y = nn::forward(net, pool.row(local[r]), ws);
    std::copy(y.begin(), y.end(), feats.row(r).begin());
  }
  coreset::FeatureMatrix fm(std::move(feats), opt.metric);
  if (opt.standardize) coreset::standardize(fm);

  std::vector<std::size_t> init(labeled.size());
  std::iota(init.begin(), init.end(), std::size_t{0});
  const auto st = coreset::kcenter_greedy(fm, init, b, {opt.chunk_size, opt.workers});

  CoresetSelection sel;
  for (std::size_t i = labeled.size(); i < st.centers.size(); ++i) {
    sel.indices.push_back(local[st.centers[i]]);
  }
  sel.delta_before = labeled.empty() ? std::numeric_limits<double>::infinity()
                                     : st.radius_history[labeled.size() - 1];
  sel.delta_after = st.radius_history.empty() ? sel.delta_before : st.radius_history.back();
  return sel;
}

struct ExperimentConfig {
  oracle::OracleSpec oracle;
  std::size_t pool_size = 2000;
  BudgetSchedule schedule{{100, 100, 100, 100, 100}};
  Strategy strategy;
  nn::NetSpec net;  // no layers: default architecture for the oracle
  nn::TrainConfig train;
  warmstart::SPConfig sp;
  std::size_t val_size = 200;
  std::size_t test_size = 1000;
  CoresetOptions coreset;
  double gamma = 0.05;
  std::size_t lipschitz_probes = 200;
  std::uint64_t seed = 0;
  bool operator==(const ExperimentConfig&) const = default;
};

struct RoundTiming {
  double wall_s = 0.0;
  double select_s = 0.0;
  double train_s = 0.0;
};

struct RoundRecord {
  std::size_t round = 0;
  std::size_t labeled_count = 0;
  std::vector<std::size_t> selected;
  metrics::TailReport tails;
  /// Output-space cover radius of the labeled set over the pool, round-t net.
  double delta = 0.0;
  /// Same-network radii around the selection (coreset rounds only).
  bool has_selection_delta = false;
  double selection_delta_before = 0.0;
  double selection_delta_after = 0.0;
  metrics::BoundReport bound;
  metrics::LipschitzCheck lipschitz;
  std::size_t epochs = 0;
  std::size_t best_epoch = 0;
  std::uint64_t train_steps = 0;
  std::vector<double> test_losses;
  Matrix test_predictions;
  RoundTiming timing;  // not part of the deterministic record
};

struct RunReport {
  std::string strategy;
  std::uint64_t seed = 0;
  std::string oracle;
  std::vector<RoundRecord> rounds;
  Matrix test_inputs;
  Matrix test_targets;
  std::vector<double> grid;

  double total_train_seconds() const {
    double s = 0.0;
    for (const auto& r : rounds) s += r.timing.train_s;
    return s;
  }
  std::uint64_t total_train_steps() const {
    std::uint64_t s = 0;
    for (const auto& r : rounds) s += r.train_steps;
    return s;
  }
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

inline Dataset label(const Matrix& inputs, const oracle::Oracle& o) {
  return {inputs, o.query_all(inputs)};
}

// Cover radius of `centers` over every pool row via one greedy pass per center.
inline double radius_of(Matrix feats, coreset::Metric metric, std::span<const std::size_t> centers,
                        const CoresetOptions& opt) {
  coreset::FeatureMatrix fm(std::move(feats), metric);
  if (opt.standardize) coreset::standardize(fm);
  return coreset::kcenter_greedy(fm, centers, 0, {opt.chunk_size, opt.workers}).cover_radius();
}

}  // namespace detail

inline RunReport run_experiment(const ExperimentConfig& cfg) {
  const oracle::Oracle oracle(cfg.oracle);
  cfg.schedule.validate(cfg.pool_size);
  const nn::NetSpec spec = cfg.net.layers.empty()
                               ? nn::default_architecture(oracle.input_dim(), oracle.output_dim())
                               : cfg.net;
  {
    const nn::Net probe(spec);
    if (probe.input_dim() != oracle.input_dim() || probe.output_dim() != oracle.output_dim()) {
      throw std::invalid_argument("network shape does not match the oracle");
    }
  }

  const std::uint64_t seed = cfg.seed;
  const Matrix pool = oracle::sample_pool(oracle, cfg.pool_size, derive_seed(seed, "pool"));
  const Dataset val = cfg.val_size > 0
                          ? detail::label(oracle::sample_pool(oracle, cfg.val_size, derive_seed(seed, "val")), oracle)
                          : Dataset{};
  const Dataset test =
      detail::label(oracle::sample_pool(oracle, std::max<std::size_t>(1, cfg.test_size),
                                        derive_seed(seed, "test")),
                    oracle);
  // Diagnostic-only labels for the whole pool; selection never sees them.
  const Dataset pool_truth = detail::label(pool, oracle);

  RunReport report;
  report.strategy = cfg.strategy.name();
  report.seed = seed;
  report.oracle = oracle::kind_name(cfg.oracle.kind);
  report.test_inputs = test.inputs;
  report.test_targets = test.targets;
  report.grid = oracle.grid();

  LabeledSet labeled(cfg.pool_size);
  nn::Net current;
  Rng probe_rng(derive_seed(seed, "lipschitz_probes"));

  for (std::size_t t = 1; t <= cfg.schedule.rounds(); ++t) {
    const auto round_start = detail::Clock::now();
    RoundRecord rec;
    rec.round = t;
    const std::size_t b = cfg.schedule.budgets[t - 1];

    const auto sel_start = detail::Clock::now();
    const auto remaining = labeled.remaining();
    if (t == 1 || cfg.strategy.selector == Selector::Random) {
      rec.selected = select_random(remaining, b, derive_seed(seed, "select_random", t));
    } else {
      auto sel = select_coreset(current, pool, remaining, labeled.indices(), b, cfg.coreset);
      rec.selected = std::move(sel.indices);
      rec.has_selection_delta = true;
      rec.selection_delta_before = sel.delta_before;
      rec.selection_delta_after = sel.delta_after;
    }
    rec.timing.select_s = detail::seconds_since(sel_start);
    labeled.add_round(rec.selected, pool, oracle);
    rec.labeled_count = labeled.size();

    nn::Net start;
    if (t == 1 || !cfg.strategy.warm_start) {
      start = nn::init_net(spec, derive_seed(seed, "init_net", t));
    } else {
      warmstart::SPConfig sp = cfg.sp;
      sp.seed = derive_seed(seed ^ cfg.sp.seed, "shrink_perturb", t);
      start = warmstart::shrink_and_perturb(current, sp);
    }
    nn::TrainConfig tc = cfg.train;
    tc.seed = derive_seed(seed ^ cfg.train.seed, "train", t);
    const auto train_start = detail::Clock::now();
    auto trained = nn::train(start, labeled.data(), val, tc);
    rec.timing.train_s = detail::seconds_since(train_start);
    current = std::move(trained.net);
    rec.epochs = trained.log.epochs.size();
    rec.best_epoch = trained.log.best_epoch;
    rec.train_steps = trained.log.steps;

    rec.test_predictions = nn::predict(current, test.inputs);
    rec.test_losses.resize(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
      rec.test_losses[i] = nn::l1_loss(rec.test_predictions.row(i), test.y(i));
    }
    rec.tails = metrics::tail_report(rec.test_losses);

    const Matrix pool_pred = nn::predict(current, pool);
    rec.delta = detail::radius_of(pool_pred, cfg.coreset.metric, labeled.indices(), cfg.coreset);

    metrics::BoundInputs bi;
    bi.pool_losses.resize(pool.rows);
    for (std::size_t i = 0; i < pool.rows; ++i) {
      bi.pool_losses[i] = nn::l1_loss(pool_pred.row(i), pool_truth.y(i));
    }
    for (std::size_t i : labeled.indices()) bi.labeled_losses.push_back(bi.pool_losses[i]);
    bi.test_losses = rec.test_losses;
    bi.alphas = nn::per_layer_weight_sums(current);
    bi.output_dim = current.output_dim();
    bi.delta = detail::radius_of(pool, coreset::Metric::L1, labeled.indices(),
                                 {coreset::Metric::L1, false, cfg.coreset.chunk_size, cfg.coreset.workers});
    bi.lambda_eta = oracle.lipschitz_bound();
    bi.output_bound = oracle.output_bound();
    bi.gamma = cfg.gamma;
    rec.bound = metrics::theorem1_report(bi);

    std::vector<metrics::LipschitzProbe> probes(cfg.lipschitz_probes);
    for (auto& p : probes) {
      const std::size_t a = probe_rng.below(pool.rows), c = probe_rng.below(pool.rows);
      p.x.assign(pool.row(a).begin(), pool.row(a).end());
      p.x_tilde.assign(pool.row(c).begin(), pool.row(c).end());
      p.y.assign(pool_truth.y(a).begin(), pool_truth.y(a).end());
    }
    rec.lipschitz = metrics::check_lipschitz_empirical(current, probes);

    rec.timing.wall_s = detail::seconds_since(round_start);
    report.rounds.push_back(std::move(rec));
  }
  return report;
}

}  // namespace alem::al

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

#pragma once

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "alem/coreset.hpp"
#include "alem/rng.hpp"

namespace alem::coreset {

struct BenchConfig {
  std::size_t n = 50000;
  std::size_t d = 128;
  std::size_t b = 2000;
  std::size_t chunk_size = 4096;
  /// Second chunk size whose selection must match the first.
  std::size_t check_chunk_size = 512;
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  Metric metric = Metric::L1;
};

struct BenchReport {
  BenchConfig config;
  std::vector<std::size_t> selected;
  std::uint64_t distance_evaluations = 0;
  std::uint64_t expected_evaluations = 0;  // b * n
  double wall_s = 0.0;
  double evaluations_per_s = 0.0;
  double points_per_s = 0.0;
  std::size_t aux_bytes = 0;
  /// 8 * (chunk_size * d + n)
  std::size_t predicted_aux_bytes = 0;
  double cover_radius = 0.0;
  bool chunk_invariant = false;
};

inline FeatureMatrix random_features(std::size_t n, std::size_t d, std::uint64_t seed,
                                     Metric metric) {
  Matrix m(n, d);
  Rng rng(derive_seed(seed, "bench_features"));
  for (double& v : m.data) v = rng.uniform();
  return {std::move(m), metric};
}

/// Times greedy selection of b centers from n random points, then repeats
/// with check_chunk_size and compares the selections.
inline BenchReport bench_kcenter(const BenchConfig& cfg) {
  if (cfg.n == 0 || cfg.d == 0 || cfg.chunk_size == 0 || cfg.check_chunk_size == 0) {
    throw std::invalid_argument("bench parameters n, d and chunk sizes must be positive");
  }
  if (cfg.b > cfg.n) throw std::invalid_argument("bench budget b exceeds n");
  const FeatureMatrix f = random_features(cfg.n, cfg.d, cfg.seed, cfg.metric);

  BenchReport r;
  r.config = cfg;
  const auto t0 = std::chrono::steady_clock::now();
  const SelectionState st = kcenter_greedy(f, {}, cfg.b, {cfg.chunk_size, cfg.workers});
  r.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.selected = st.centers;
  r.distance_evaluations = st.distance_evaluations;
  r.expected_evaluations = static_cast<std::uint64_t>(cfg.b) * cfg.n;
  r.evaluations_per_s = r.wall_s > 0 ? static_cast<double>(r.distance_evaluations) / r.wall_s : 0.0;
  r.points_per_s = r.wall_s > 0 ? static_cast<double>(cfg.n) * static_cast<double>(cfg.b) / r.wall_s : 0.0;
  r.aux_bytes = st.aux_bytes;
  r.predicted_aux_bytes = sizeof(double) * (cfg.chunk_size * cfg.d + cfg.n);
  r.cover_radius = cfg.b == 0 ? 0.0 : st.cover_radius();

  const SelectionState check = kcenter_greedy(f, {}, cfg.b, {cfg.check_chunk_size, cfg.workers});
  r.chunk_invariant = check.centers == st.centers && check.min_dist == st.min_dist;
  return r;
}

}  // namespace alem::coreset

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

// Greedy k-center (farthest-first traversal) with an incremental running
// minimum distance. Each added center costs one pass over the pool: the pass
// folds the distances to the new center into min_dist chunk by chunk and
// finds the next farthest point in the same sweep, so no pool x centers
// distance matrix is ever formed.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "alem/matrix.hpp"

namespace alem::coreset {

enum class Metric { L1, L2 };

inline const char* metric_name(Metric m) { return m == Metric::L1 ? "l1" : "l2"; }

inline Metric parse_metric(const std::string& s) {
  if (s == "l1" || s == "L1") return Metric::L1;
  if (s == "l2" || s == "L2") return Metric::L2;
  throw std::invalid_argument("unknown metric '" + s + "' (expected l1 or l2)");
}

struct FeatureMatrix {
  Matrix values;
  Metric metric = Metric::L1;

  FeatureMatrix() = default;
  FeatureMatrix(Matrix m, Metric metric_) : values(std::move(m)), metric(metric_) {
    validate();
  }

  std::size_t n() const { return values.rows; }
  std::size_t d() const { return values.cols; }
  std::span<const double> row(std::size_t i) const { return values.row(i); }

  void validate() const {
    if (values.rows == 0 || values.cols == 0) {
      throw std::invalid_argument("feature matrix must have at least one row and column");
    }
    for (double v : values.data) {
      if (!std::isfinite(v)) throw std::invalid_argument("feature matrix has a non-finite entry");
    }
  }
};

/// Per-column z-scoring; constant columns are only centered.
inline void standardize(FeatureMatrix& f) {
  const std::size_t n = f.n(), d = f.d();
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += f.values.data[i * d + j];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = f.values.data[i * d + j] - mean;
      var += u * u;
    }
    const double sd = std::sqrt(var / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      double& v = f.values.data[i * d + j];
      v = sd > 0.0 ? (v - mean) / sd : v - mean;
    }
  }
}

/// Four independent partial sums in a fixed order: vectorizable and
/// bitwise reproducible.
inline double distance(std::span<const double> a, std::span<const double> b, Metric m) {
  const std::size_t d = a.size();
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  if (m == Metric::L1) {
    for (; i + 4 <= d; i += 4) {
      s0 += std::abs(a[i] - b[i]);
      s1 += std::abs(a[i + 1] - b[i + 1]);
      s2 += std::abs(a[i + 2] - b[i + 2]);
      s3 += std::abs(a[i + 3] - b[i + 3]);
    }
    for (; i < d; ++i) s0 += std::abs(a[i] - b[i]);
    return (s0 + s1) + (s2 + s3);
  }
  for (; i + 4 <= d; i += 4) {
    const double u0 = a[i] - b[i], u1 = a[i + 1] - b[i + 1];
    const double u2 = a[i + 2] - b[i + 2], u3 = a[i + 3] - b[i + 3];
    s0 += u0 * u0;
    s1 += u1 * u1;
    s2 += u2 * u2;
    s3 += u3 * u3;
  }
  for (; i < d; ++i) {
    const double u = a[i] - b[i];
    s0 += u * u;
  }
  return std::sqrt((s0 + s1) + (s2 + s3));
}

struct SelectOptions {
  std::size_t chunk_size = 4096;
  std::size_t workers = 1;
};

struct SelectionState {
  std::vector<std::size_t> centers;
  std::vector<double> min_dist;
  /// Cover radius after each center was added.
  std::vector<double> radius_history;
  std::uint64_t distance_evaluations = 0;
  /// Bytes of scratch memory held besides the feature matrix.
  std::size_t aux_bytes = 0;

  /// max_i min_dist[i]; +inf when there are no centers yet.
  double cover_radius() const {
    return radius_history.empty() ? std::numeric_limits<double>::infinity()
                                  : radius_history.back();
  }
};

/// Farthest non-center point after a pass; value 0 and index n when every
/// point is a center.
struct Farthest {
  double value = -1.0;
  std::size_t index = 0;
};

namespace detail {

inline bool better(const Farthest& a, const Farthest& b) {
  return a.value > b.value || (a.value == b.value && a.index < b.index);
}

// Updates rows [begin, end) and returns their farthest non-center row.
inline Farthest update_range(std::span<double> min_dist, const char* is_center,
                             const FeatureMatrix& f, std::span<const double> center,
                             std::size_t begin, std::size_t end, std::size_t chunk,
                             std::vector<double>& buf) {
  Farthest best;
  best.index = f.n();
  buf.resize(chunk);
  for (std::size_t lo = begin; lo < end; lo += chunk) {
    const std::size_t hi = std::min(end, lo + chunk);
    for (std::size_t i = lo; i < hi; ++i) buf[i - lo] = distance(f.row(i), center, f.metric);
    for (std::size_t i = lo; i < hi; ++i) {
      double& m = min_dist[i];
      if (buf[i - lo] < m) m = buf[i - lo];
      if (is_center != nullptr && is_center[i]) continue;
      if (m > best.value) {
        best.value = m;
        best.index = i;
      }
    }
  }
  return best;
}

// One pass against a new center, split over workers by contiguous blocks.
inline Farthest update_pass(std::span<double> min_dist, const char* is_center,
                            const FeatureMatrix& f, std::size_t new_center,
                            const SelectOptions& opt) {
  const std::size_t n = f.n();
  const std::size_t chunk = std::max<std::size_t>(1, opt.chunk_size);
  const std::size_t workers = std::clamp<std::size_t>(opt.workers, 1, std::max<std::size_t>(1, n / chunk));
  const std::vector<double> center(f.row(new_center).begin(), f.row(new_center).end());
  if (workers == 1) {
    std::vector<double> buf;
    return update_range(min_dist, is_center, f, center, 0, n, chunk, buf);
  }
  std::vector<Farthest> local(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t per = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t b = std::min(n, w * per), e = std::min(n, b + per);
      pool.emplace_back([&, w, b, e] {
        std::vector<double> buf;
        local[w] = update_range(min_dist, is_center, f, center, b, e, chunk, buf);
      });
    }
  }
  Farthest best;
  best.index = n;
  for (const auto& l : local) {
    if (l.index < n && (best.index == n || better(l, best))) best = l;
  }
  return best;
}

}  // namespace detail

/// min_dist[i] <- min(min_dist[i], dist(i, new_center)), chunk by chunk.
inline void pairwise_min_update(std::span<double> min_dist, const FeatureMatrix& features,
                                std::size_t new_center, std::size_t chunk_size,
                                std::size_t workers = 1) {
  if (new_center >= features.n()) throw std::out_of_range("center index out of range");
  if (min_dist.size() != features.n()) {
    throw std::invalid_argument("min_dist length does not match the pool size");
  }
  detail::update_pass(min_dist, nullptr, features, new_center, {chunk_size, workers});
}

/// Adds `k` centers to `initial_centers` by farthest-first traversal. Ties go
/// to the lowest pool index; with no initial centers the first pick is
/// index 0.
inline SelectionState kcenter_greedy(const FeatureMatrix& features,
                                     std::span<const std::size_t> initial_centers,
                                     std::size_t k, const SelectOptions& opt = {}) {
  const std::size_t n = features.n();
  std::vector<char> is_center(n, 0);
  for (const std::size_t c : initial_centers) {
    if (c >= n) {
      throw std::out_of_range("initial center " + std::to_string(c) + " is outside a pool of " +
                              std::to_string(n));
    }
    if (is_center[c]) throw std::invalid_argument("initial center " + std::to_string(c) + " repeats");
    is_center[c] = 1;
  }
  if (k > n - initial_centers.size()) {
    throw std::invalid_argument("cannot select " + std::to_string(k) + " centers from " +
                                std::to_string(n - initial_centers.size()) + " remaining points");
  }
  if (opt.chunk_size == 0) throw std::invalid_argument("chunk size must be positive");

  SelectionState st;
  st.min_dist.assign(n, std::numeric_limits<double>::infinity());
  const std::size_t total = initial_centers.size() + k;
  st.centers.reserve(total);
  const std::size_t workers = std::max<std::size_t>(1, opt.workers);
  st.aux_bytes = n * (sizeof(double) + sizeof(char)) +
                 workers * (opt.chunk_size + features.d()) * sizeof(double) +
                 total * (sizeof(std::size_t) + sizeof(double));

  Farthest next;
  auto add = [&](std::size_t c) {
    is_center[c] = 1;
    st.min_dist[c] = 0.0;
    st.centers.push_back(c);
    next = detail::update_pass(st.min_dist, is_center.data(), features, c, opt);
    st.distance_evaluations += n;
    st.radius_history.push_back(next.index < n ? next.value : 0.0);
  };
  for (const std::size_t c : initial_centers) add(c);
  for (std::size_t picked = 0; picked < k; ++picked) {
    add(st.centers.empty() ? 0 : next.index);
  }
  return st;
}

/// max_i min_c dist(i, c), computed directly.
inline double cover_radius(const FeatureMatrix& features, std::span<const std::size_t> centers) {
  if (centers.empty()) throw std::invalid_argument("cover radius needs at least one center");
  for (const std::size_t c : centers) {
    if (c >= features.n()) throw std::out_of_range("center index out of range");
  }
  double radius = 0.0;
  for (std::size_t i = 0; i < features.n(); ++i) {
    double m = std::numeric_limits<double>::infinity();
    for (const std::size_t c : centers) {
      m = std::min(m, distance(features.row(i), features.row(c), features.metric));
    }
    radius = std::max(radius, m);
  }
  return radius;
}

struct ExactSolution {
  std::vector<std::size_t> centers;
  double radius = 0.0;
};

inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(r);
}

/// Exhaustive minimum-radius k-subset; ties go to the lexicographically
/// smallest subset.
inline ExactSolution kcenter_bruteforce(const FeatureMatrix& features, std::size_t k,
                                        double max_subsets = 1e6) {
  const std::size_t n = features.n();
  if (k == 0 || k > n) {
    throw std::invalid_argument("k must lie in [1, " + std::to_string(n) + "]");
  }
  if (binomial(n, k) > max_subsets) {
    throw std::invalid_argument("instance too large for exhaustive search: C(" +
                                std::to_string(n) + ", " + std::to_string(k) + ") subsets");
  }
  const bool cached = n <= 2048;
  std::vector<double> dist;
  if (cached) {
    dist.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        dist[i * n + j] = distance(features.row(i), features.row(j), features.metric);
  }
  auto dij = [&](std::size_t i, std::size_t j) {
    return cached ? dist[i * n + j] : distance(features.row(i), features.row(j), features.metric);
  };

  std::vector<std::size_t> subset(k);
  for (std::size_t i = 0; i < k; ++i) subset[i] = i;
  ExactSolution best{subset, std::numeric_limits<double>::infinity()};
  while (true) {
    double radius = 0.0;
    for (std::size_t i = 0; i < n && radius < best.radius; ++i) {
      double m = std::numeric_limits<double>::infinity();
      for (const std::size_t c : subset) m = std::min(m, dij(i, c));
      radius = std::max(radius, m);
    }
    if (radius < best.radius) best = {subset, radius};
    // Next k-subset in lexicographic order.
    std::size_t pos = k;
    while (pos > 0 && subset[pos - 1] == n - k + pos - 1) --pos;
    if (pos == 0) break;
    ++subset[pos - 1];
    for (std::size_t j = pos; j < k; ++j) subset[j] = subset[j - 1] + 1;
  }
  return best;
}

}  // namespace alem::coreset

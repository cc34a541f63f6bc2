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

// Loss-distribution metrics and bound diagnostics for trained emulators.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "alem/nn.hpp"

namespace alem::metrics {

namespace detail {

inline std::vector<double> sorted_desc(std::span<const double> losses) {
  std::vector<double> v(losses.begin(), losses.end());
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

inline std::size_t tail_count(double p, std::size_t n) {
  const double c = p * static_cast<double>(n);
  const auto k = static_cast<std::size_t>(std::ceil(c - 1e-9 * std::max(1.0, c)));
  return std::clamp<std::size_t>(k, 1, n);
}

// Running mean m_k = m_{k-1} + (v_k - m_{k-1}) / k over a descending list.
// Since v_k <= m_{k-1} every step moves down (or stays), so the sequence of
// tail means is nonincreasing in floating point too, and equal inputs give
// back the input exactly.
inline double running_mean(std::span<const double> desc, std::size_t k) {
  double m = desc[0];
  for (std::size_t i = 1; i < k; ++i) m += (desc[i] - m) / static_cast<double>(i + 1);
  return m;
}

inline void check_losses(std::span<const double> losses) {
  if (losses.empty()) throw std::invalid_argument("loss list is empty");
}

}  // namespace detail

/// Mean of the ceil(p * N) largest losses.
inline double tail_mean(std::span<const double> losses, double worst_fraction) {
  detail::check_losses(losses);
  if (!(worst_fraction > 0.0 && worst_fraction <= 1.0)) {
    throw std::invalid_argument("worst fraction must lie in (0, 1]");
  }
  const auto desc = detail::sorted_desc(losses);
  return detail::running_mean(desc, detail::tail_count(worst_fraction, desc.size()));
}

/// Mean of the losses ranked between the worst `lo` and worst `hi`
/// fractions, i.e. a single percentile bucket rather than the whole tail.
inline double tail_bucket_mean(std::span<const double> losses, double lo, double hi) {
  detail::check_losses(losses);
  if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) {
    throw std::invalid_argument("bucket bounds must satisfy 0 <= lo < hi <= 1");
  }
  const auto desc = detail::sorted_desc(losses);
  const std::size_t b = lo == 0.0 ? 0 : detail::tail_count(lo, desc.size());
  const std::size_t e = std::max(b + 1, detail::tail_count(hi, desc.size()));
  return detail::running_mean(std::span(desc).subspan(b), std::min(e, desc.size()) - b);
}

inline double mean(std::span<const double> v) {
  detail::check_losses(v);
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

struct TailReport {
  double mean = 0.0;
  double tail1 = 0.0;
  double tail5 = 0.0;
  double tail10 = 0.0;
  std::size_t median_index = 0;
  /// Sample indices of the worst 1%, worst first.
  std::vector<std::size_t> worst_indices;
  bool operator==(const TailReport&) const = default;
};

inline TailReport tail_report(std::span<const double> losses) {
  detail::check_losses(losses);
  TailReport r;
  r.mean = tail_mean(losses, 1.0);
  r.tail1 = tail_mean(losses, 0.01);
  r.tail5 = tail_mean(losses, 0.05);
  r.tail10 = tail_mean(losses, 0.10);
  std::vector<std::size_t> order(losses.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return losses[a] < losses[b]; });
  r.median_index = order[(order.size() - 1) / 2];
  const std::size_t k = detail::tail_count(0.01, losses.size());
  for (std::size_t i = 0; i < k; ++i) r.worst_indices.push_back(order[order.size() - 1 - i]);
  return r;
}

/// |mean(pool) - mean(train)|
inline double coreset_loss(std::span<const double> train_losses,
                           std::span<const double> pool_losses) {
  return std::abs(mean(pool_losses) - mean(train_losses));
}

/// sqrt(L^2 ln(1/gamma) / (2n))
inline double hoeffding_term(double loss_cap, double gamma, std::uint64_t n) {
  if (!(loss_cap >= 0.0)) throw std::invalid_argument("loss cap must be non-negative");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
  if (n == 0) throw std::invalid_argument("sample count must be positive");
  return std::sqrt(loss_cap * loss_cap * std::log(1.0 / gamma) / (2.0 * static_cast<double>(n)));
}

/// Product of per-layer alphas: a Lipschitz constant of x -> net(x) in l_1
/// (hence of the summed L1 loss in x).
inline double lipschitz_bound(const nn::Net& net) {
  double p = 1.0;
  for (double a : nn::per_layer_weight_sums(net)) p *= a;
  return p;
}

/// alpha^(number of parameterized layers) with alpha the largest per-layer
/// value; never smaller than lipschitz_bound.
inline double lipschitz_bound_uniform(const nn::Net& net) {
  const auto alphas = nn::per_layer_weight_sums(net);
  const double a = *std::max_element(alphas.begin(), alphas.end());
  return std::pow(a, static_cast<double>(alphas.size()));
}

struct LipschitzProbe {
  std::vector<double> x;
  std::vector<double> x_tilde;
  std::vector<double> y;
};

struct LipschitzCheck {
  std::size_t pairs = 0;
  std::size_t violations = 0;
  double bound = 0.0;
  /// max |dl| / (bound * ||dx||_1); 0 when no pair separates.
  double max_ratio = 0.0;
};

/// Compares |l(x,y) - l(x~,y)| with bound * ||x - x~||_1, where l is the summed
/// (not averaged) L1 loss. A pair violates when the gap exceeds the bound by
/// more than `rel_tol` relative.
inline LipschitzCheck check_lipschitz_empirical(const nn::Net& net,
                                                std::span<const LipschitzProbe> probes,
                                                double rel_tol = 1e-9) {
  LipschitzCheck r;
  r.bound = lipschitz_bound(net);
  r.pairs = probes.size();
  const double dim = static_cast<double>(net.output_dim());
  nn::Workspace ws;
  for (const auto& p : probes) {
    const double la = nn::l1_loss(nn::forward(net, p.x, ws), p.y) * dim;
    const double lb = nn::l1_loss(nn::forward(net, p.x_tilde, ws), p.y) * dim;
    double dx = 0.0;
    for (std::size_t i = 0; i < p.x.size(); ++i) dx += std::abs(p.x[i] - p.x_tilde[i]);
    const double gap = std::abs(la - lb);
    const double allowed = r.bound * dx;
    if (gap > allowed * (1.0 + rel_tol)) ++r.violations;
    if (allowed > 0.0) r.max_ratio = std::max(r.max_ratio, gap / allowed);
  }
  return r;
}

/// Everything the core-set bound diagnostic is assembled from.
struct BoundInputs {
  std::vector<double> pool_losses;
  std::vector<double> labeled_losses;
  std::vector<double> test_losses;
  std::vector<double> alphas;
  std::size_t output_dim = 1;
  /// Cover radius of the labeled set over the pool, in input space (l_1).
  double delta = 0.0;
  /// Lipschitz constant of the simulator (reported, enters only the V term).
  double lambda_eta = 0.0;
  /// Simulator output bound.
  double output_bound = 0.0;
  double gamma = 0.05;
};

struct BoundReport {
  double delta = 0.0;
  std::vector<double> alphas;
  /// Lipschitz constant of the mean-L1 loss: prod(alphas) / output_dim.
  double lambda_l = 0.0;
  /// Same with the uniform alpha^(layers) form.
  double lambda_l_uniform = 0.0;
  double lambda_eta = 0.0;
  double output_bound = 0.0;
  double max_pool_loss = 0.0;
  /// max(output_bound, max_pool_loss)
  double loss_cap = 0.0;
  double gamma = 0.05;
  std::uint64_t n = 0;
  double hoeffding = 0.0;
  /// The V (support hypervolume) term is not computable and is left out.
  bool v_term_omitted = true;
  double rhs = 0.0;
  /// Measured core-set loss |pool mean - labeled mean|.
  double lhs = 0.0;
  double training_error = 0.0;
  double pool_mean = 0.0;
  double test_mean = 0.0;
  /// |test mean - pool mean|
  double generalisation_estimate = 0.0;
  bool operator==(const BoundReport&) const = default;
};

/// rhs = delta * lambda_l + hoeffding(loss_cap, gamma, n).
inline double assemble_rhs(double delta, double lambda_l, double hoeffding) {
  return delta * lambda_l + hoeffding;
}

inline BoundReport theorem1_report(const BoundInputs& in) {
  if (in.pool_losses.empty() || in.labeled_losses.empty()) {
    throw std::invalid_argument("bound report needs pool and labeled losses");
  }
  if (in.alphas.empty()) throw std::invalid_argument("bound report needs per-layer weight sums");
  if (!(in.delta >= 0.0)) throw std::invalid_argument("cover radius must be non-negative");
  BoundReport r;
  r.delta = in.delta;
  r.alphas = in.alphas;
  double prod = 1.0;
  for (double a : in.alphas) prod *= a;
  const double amax = *std::max_element(in.alphas.begin(), in.alphas.end());
  const double dim = static_cast<double>(in.output_dim);
  r.lambda_l = prod / dim;
  r.lambda_l_uniform = std::pow(amax, static_cast<double>(in.alphas.size())) / dim;
  r.lambda_eta = in.lambda_eta;
  r.output_bound = in.output_bound;
  r.max_pool_loss = *std::max_element(in.pool_losses.begin(), in.pool_losses.end());
  r.loss_cap = std::max(in.output_bound, r.max_pool_loss);
  r.gamma = in.gamma;
  r.n = in.pool_losses.size();
  r.hoeffding = hoeffding_term(r.loss_cap, r.gamma, r.n);
  r.rhs = assemble_rhs(r.delta, r.lambda_l, r.hoeffding);
  r.pool_mean = mean(in.pool_losses);
  r.training_error = mean(in.labeled_losses);
  r.lhs = std::abs(r.pool_mean - r.training_error);
  if (!in.test_losses.empty()) {
    r.test_mean = mean(in.test_losses);
    r.generalisation_estimate = std::abs(r.test_mean - r.pool_mean);
  }
  return r;
}

}  // namespace alem::metrics

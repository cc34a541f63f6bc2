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

// Test-only helpers: random networks and data, a finite-difference
// gradient oracle, and a check that a sample sits away from every kink of
// |.| and ReLU. Nothing here calls nn::grad or nn::accumulate_gradient.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "alem/matrix.hpp"
#include "alem/nn.hpp"
#include "alem/rng.hpp"

namespace alem::testing {

inline Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Matrix m(r, c);
  for (double& v : m.data) v = rng.uniform(lo, hi);
  return m;
}

inline nn::Net random_net(const nn::NetSpec& spec, Rng& rng, double bias_scale = 0.3) {
  nn::Net net = nn::init_net(spec, rng.next_u64());
  for (std::size_t d = 0; d < net.plan().size(); ++d) {
    for (double& b : net.biases(d)) b = rng.uniform(-bias_scale, bias_scale);
  }
  return net;
}

/// Mean L1 loss over the batch, straight from forward().
inline double batch_loss(const nn::Net& net, const Dataset& data) {
  double acc = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) acc += nn::l1_loss(nn::forward(net, data.x(i)), data.y(i));
  return acc / static_cast<double>(data.size());
}

/// Signs of every ReLU argument and residual over the batch.
inline std::vector<char> kink_pattern(const nn::Net& net, const Dataset& data) {
  std::vector<char> p;
  nn::Workspace ws;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto out = nn::forward(net, data.x(i), ws);
    for (std::size_t d = 0; d < net.plan().size(); ++d) {
      if (!std::holds_alternative<nn::ReLU>(net.spec().layers[d])) continue;
      for (double v : ws.acts[d]) p.push_back(v > 0.0 ? 1 : v < 0.0 ? -1 : 0);
    }
    const auto y = data.y(i);
    for (std::size_t j = 0; j < out.size(); ++j) p.push_back(out[j] > y[j] ? 1 : out[j] < y[j] ? -1 : 0);
  }
  return p;
}

/// Central differences of batch_loss with respect to every parameter. The
/// loss is linear in any single parameter between kinks, so the step is
/// halved until both probes keep the kink pattern of the base point; the
/// difference is then exact up to rounding.
inline std::vector<double> numeric_gradient(const nn::Net& net, const Dataset& data, double h = 1e-3) {
  nn::Net probe = net;
  const auto base = kink_pattern(net, data);
  std::vector<double> g(net.parameter_count());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double saved = probe.params()[k];
    for (double step = h;; step *= 0.5) {
      probe.params()[k] = saved + step;
      const double up = batch_loss(probe, data);
      const bool up_ok = kink_pattern(probe, data) == base;
      probe.params()[k] = saved - step;
      const double down = batch_loss(probe, data);
      const bool down_ok = kink_pattern(probe, data) == base;
      g[k] = (up - down) / (2.0 * step);
      if ((up_ok && down_ok) || step < 1e-8) break;
    }
    probe.params()[k] = saved;
  }
  return g;
}

/// Smallest |argument| of any ReLU or |.| over the batch.
inline double kink_margin(const nn::Net& net, const Dataset& data) {
  double margin = std::numeric_limits<double>::infinity();
  nn::Workspace ws;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto out = nn::forward(net, data.x(i), ws);
    for (std::size_t d = 0; d < net.plan().size(); ++d) {
      if (!std::holds_alternative<nn::ReLU>(net.spec().layers[d])) continue;
      for (double v : ws.acts[d]) margin = std::min(margin, std::abs(v));
    }
    const auto y = data.y(i);
    for (std::size_t j = 0; j < out.size(); ++j) margin = std::min(margin, std::abs(out[j] - y[j]));
  }
  return margin;
}

/// |a - n| / max(|a|, |n|, floor). The floor keeps exact-zero components
/// from dividing rounding noise by zero.
inline double relative_error(double analytic, double numeric, double floor = 1e-5) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

/// Random batch whose every kink argument is at least `margin` from zero;
/// returns false if none is found within the retry budget.
inline bool kink_free_batch(const nn::Net& net, std::size_t batch, Rng& rng, Dataset& out,
                            double margin = 1e-3, int tries = 500) {
  for (int t = 0; t < tries; ++t) {
    Dataset d;
    for (std::size_t i = 0; i < batch; ++i) {
      std::vector<double> x(net.input_dim()), y(net.output_dim());
      for (double& v : x) v = rng.uniform(-1.0, 1.0);
      for (double& v : y) v = rng.uniform(-1.0, 1.0);
      d.append(x, y);
    }
    if (kink_margin(net, d) >= margin) {
      out = std::move(d);
      return true;
    }
  }
  return false;
}

/// Random network shapes mixing dense and convolutional layers.
inline nn::NetSpec random_spec(Rng& rng) {
  nn::NetSpec s;
  switch (rng.below(4)) {
    case 0: {
      const std::size_t in = 1 + rng.below(4), out = 1 + rng.below(3);
      s = {in, {nn::FullyConnected{in, out}}};
      break;
    }
    case 1: {
      const std::size_t in = 2 + rng.below(4), h = 2 + rng.below(5), out = 1 + rng.below(4);
      s = {in, {nn::FullyConnected{in, h}, nn::ReLU{}, nn::FullyConnected{h, out}}};
      break;
    }
    case 2: {
      const std::size_t len = 6 + rng.below(5), k = 2 + rng.below(3), oc = 1 + rng.below(3);
      const std::size_t stride = 1 + rng.below(2);
      const std::size_t out_len = (len - k) / stride + 1;
      s = {len, {nn::Conv1D{1, oc, k, stride}, nn::ReLU{}, nn::FullyConnected{oc * out_len, 2}}};
      break;
    }
    default: {
      const std::size_t len = 9 + rng.below(3);
      s = {len,
           {nn::Conv1D{1, 2, 3, 1}, nn::ReLU{}, nn::Conv1D{2, 2, 3, 2}, nn::ReLU{},
            nn::FullyConnected{2 * (((len - 2) - 3) / 2 + 1), 4}, nn::ReLU{}, nn::FullyConnected{4, 3}}};
      break;
    }
  }
  return s;
}

}  // namespace alem::testing

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

// Small deterministic ReLU network: 1-D convolutions, dense layers, mean L1
// loss, hand-written backpropagation and Adam.
//
// Parameter layout follows layer order; within a layer the weights come
// first, then the biases.
//   FullyConnected: W[out][in], y_j = b_j + sum_i W[j][i] x_i
//   Conv1D:         W[oc][ic][k], input and output stored channel-major,
//                   y[oc][p] = b[oc] + sum_{ic,k} W[oc][ic][k] x[ic][p*s + k]

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "alem/matrix.hpp"
#include "alem/rng.hpp"

namespace alem::nn {

struct Conv1D {
  std::size_t in_channels = 1;
  std::size_t out_channels = 1;
  std::size_t kernel_width = 1;
  std::size_t stride = 1;
  bool operator==(const Conv1D&) const = default;
};

struct FullyConnected {
  std::size_t in_dim = 1;
  std::size_t out_dim = 1;
  bool operator==(const FullyConnected&) const = default;
};

struct ReLU {
  bool operator==(const ReLU&) const = default;
};

using LayerSpec = std::variant<Conv1D, FullyConnected, ReLU>;

struct NetSpec {
  std::size_t input_dim = 0;
  std::vector<LayerSpec> layers;
  bool operator==(const NetSpec&) const = default;
};

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline const char* layer_name(const LayerSpec& l) {
  switch (l.index()) {
    case 0: return "Conv1D";
    case 1: return "FullyConnected";
    default: return "ReLU";
  }
}

/// Resolved geometry of one layer for a concrete input size.
struct LayerPlan {
  std::size_t in_size = 0;
  std::size_t out_size = 0;
  std::size_t in_len = 0;   // Conv1D only
  std::size_t out_len = 0;  // Conv1D only
  std::size_t weight_offset = 0;
  std::size_t weight_count = 0;
  std::size_t bias_offset = 0;
  std::size_t bias_count = 0;
  bool parameterized() const { return weight_count > 0; }
};

namespace detail {

inline std::string pair_label(const NetSpec& spec, std::size_t d) {
  const std::string prev =
      d == 0 ? std::string("input")
             : "layer " + std::to_string(d - 1) + " (" +
                   layer_name(spec.layers[d - 1]) + ")";
  return prev + " -> layer " + std::to_string(d) + " (" +
         layer_name(spec.layers[d]) + ")";
}

}  // namespace detail

inline std::vector<LayerPlan> plan_layers(const NetSpec& spec) {
  if (spec.input_dim == 0) throw ShapeError("input dimension must be positive");
  if (spec.layers.empty()) throw ShapeError("network has no layers");
  std::vector<LayerPlan> plans;
  plans.reserve(spec.layers.size());
  std::size_t size = spec.input_dim;
  std::size_t offset = 0;
  for (std::size_t d = 0; d < spec.layers.size(); ++d) {
    LayerPlan p;
    p.in_size = size;
    const auto fail = [&](const std::string& why) {
      throw ShapeError(detail::pair_label(spec, d) + ": " + why);
    };
    if (const auto* c = std::get_if<Conv1D>(&spec.layers[d])) {
      if (c->in_channels == 0 || c->out_channels == 0 || c->kernel_width == 0 ||
          c->stride == 0) {
        fail("Conv1D parameters must be positive");
      }
      if (size % c->in_channels != 0) {
        fail("size " + std::to_string(size) + " is not divisible by " +
             std::to_string(c->in_channels) + " input channels");
      }
      p.in_len = size / c->in_channels;
      if (p.in_len < c->kernel_width) {
        fail("length " + std::to_string(p.in_len) +
             " is shorter than kernel width " + std::to_string(c->kernel_width));
      }
      p.out_len = (p.in_len - c->kernel_width) / c->stride + 1;
      p.out_size = c->out_channels * p.out_len;
      p.weight_count = c->out_channels * c->in_channels * c->kernel_width;
      p.bias_count = c->out_channels;
    } else if (const auto* f = std::get_if<FullyConnected>(&spec.layers[d])) {
      if (f->in_dim == 0 || f->out_dim == 0) fail("dimensions must be positive");
      if (f->in_dim != size) {
        fail("expects " + std::to_string(f->in_dim) + " inputs but receives " +
             std::to_string(size));
      }
      p.out_size = f->out_dim;
      p.weight_count = f->in_dim * f->out_dim;
      p.bias_count = f->out_dim;
    } else {
      p.out_size = size;
    }
    p.weight_offset = offset;
    p.bias_offset = offset + p.weight_count;
    offset += p.weight_count + p.bias_count;
    size = p.out_size;
    plans.push_back(p);
  }
  return plans;
}

/// Architecture plus parameters. Value type: copies are deep.
class Net {
 public:
  Net() = default;
  explicit Net(NetSpec spec)
      : spec_(std::move(spec)), plan_(plan_layers(spec_)) {
    params_.assign(plan_.back().bias_offset + plan_.back().bias_count, 0.0);
  }

  const NetSpec& spec() const { return spec_; }
  const std::vector<LayerPlan>& plan() const { return plan_; }
  std::size_t input_dim() const { return spec_.input_dim; }
  std::size_t output_dim() const { return plan_.back().out_size; }
  std::size_t parameter_count() const { return params_.size(); }

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }

  std::span<double> weights(std::size_t d) {
    return {params_.data() + plan_[d].weight_offset, plan_[d].weight_count};
  }
  std::span<const double> weights(std::size_t d) const {
    return {params_.data() + plan_[d].weight_offset, plan_[d].weight_count};
  }
  std::span<double> biases(std::size_t d) {
    return {params_.data() + plan_[d].bias_offset, plan_[d].bias_count};
  }
  std::span<const double> biases(std::size_t d) const {
    return {params_.data() + plan_[d].bias_offset, plan_[d].bias_count};
  }

  bool operator==(const Net& o) const {
    return spec_ == o.spec_ && params_ == o.params_;
  }

 private:
  NetSpec spec_;
  std::vector<LayerPlan> plan_;
  std::vector<double> params_;
};

inline std::size_t fan_in(const LayerSpec& l) {
  if (const auto* c = std::get_if<Conv1D>(&l)) return c->in_channels * c->kernel_width;
  if (const auto* f = std::get_if<FullyConnected>(&l)) return f->in_dim;
  return 0;
}

/// Weights ~ U(-sqrt(6/fan_in), sqrt(6/fan_in)), biases zero.
inline Net init_net(const NetSpec& spec, std::uint64_t seed) {
  Net net(spec);
  Rng rng(derive_seed(seed, "init_net"));
  for (std::size_t d = 0; d < spec.layers.size(); ++d) {
    if (!net.plan()[d].parameterized()) continue;
    const double half = std::sqrt(6.0 / static_cast<double>(fan_in(spec.layers[d])));
    for (double& w : net.weights(d)) w = rng.uniform(-half, half);
  }
  return net;
}

/// Conv1D(1->8,k5) ReLU Conv1D(8->8,k5) ReLU FC(->128) ReLU FC(->out) when the
/// input is long enough for two width-5 convolutions; a dense
/// FC(->64) ReLU FC(->128) ReLU FC(->out) stack otherwise.
inline NetSpec default_architecture(std::size_t input_dim, std::size_t output_dim) {
  NetSpec s;
  s.input_dim = input_dim;
  if (input_dim >= 9) {
    const std::size_t len = input_dim - 8;
    s.layers = {Conv1D{1, 8, 5, 1}, ReLU{}, Conv1D{8, 8, 5, 1}, ReLU{},
                FullyConnected{8 * len, 128}, ReLU{},
                FullyConnected{128, output_dim}};
  } else {
    s.layers = {FullyConnected{input_dim, 64}, ReLU{},
                FullyConnected{64, 128}, ReLU{},
                FullyConnected{128, output_dim}};
  }
  return s;
}

/// Per-layer activations kept for backpropagation.
struct Workspace {
  std::vector<std::vector<double>> acts;  // acts[0] = input, acts[d+1] = output of layer d
  std::vector<double> delta;
  std::vector<double> delta_prev;
};

namespace detail {

inline void layer_forward(const Net& net, std::size_t d, std::span<const double> in,
                          std::span<double> out) {
  const LayerPlan& p = net.plan()[d];
  const LayerSpec& l = net.spec().layers[d];
  if (const auto* f = std::get_if<FullyConnected>(&l)) {
    const auto w = net.weights(d);
    const auto b = net.biases(d);
    for (std::size_t j = 0; j < f->out_dim; ++j) {
      const double* wr = w.data() + j * f->in_dim;
      double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
      std::size_t i = 0;
      for (; i + 4 <= f->in_dim; i += 4) {
        a0 += wr[i] * in[i];
        a1 += wr[i + 1] * in[i + 1];
        a2 += wr[i + 2] * in[i + 2];
        a3 += wr[i + 3] * in[i + 3];
      }
      for (; i < f->in_dim; ++i) a0 += wr[i] * in[i];
      out[j] = ((a0 + a1) + (a2 + a3)) + b[j];
    }
  } else if (const auto* c = std::get_if<Conv1D>(&l)) {
    const auto w = net.weights(d);
    const auto b = net.biases(d);
    const std::size_t k = c->kernel_width;
    for (std::size_t oc = 0; oc < c->out_channels; ++oc) {
      for (std::size_t pos = 0; pos < p.out_len; ++pos) {
        double acc = 0.0;
        for (std::size_t ic = 0; ic < c->in_channels; ++ic) {
          const double* wr = w.data() + (oc * c->in_channels + ic) * k;
          const double* xr = in.data() + ic * p.in_len + pos * c->stride;
          for (std::size_t t = 0; t < k; ++t) acc += wr[t] * xr[t];
        }
        out[oc * p.out_len + pos] = acc + b[oc];
      }
    }
  } else {
    for (std::size_t i = 0; i < p.in_size; ++i) out[i] = in[i] > 0.0 ? in[i] : 0.0;
  }
}

// Accumulates parameter gradients of layer d into g and, when delta_in is
// non-empty, writes the gradient with respect to the layer input there.
inline void layer_backward(const Net& net, std::size_t d, std::span<const double> in,
                           std::span<const double> delta_out,
                           std::span<double> delta_in, std::span<double> g) {
  const LayerPlan& p = net.plan()[d];
  const LayerSpec& l = net.spec().layers[d];
  const bool want_input = !delta_in.empty();
  if (const auto* f = std::get_if<FullyConnected>(&l)) {
    const auto w = net.weights(d);
    double* gw = g.data() + p.weight_offset;
    double* gb = g.data() + p.bias_offset;
    if (want_input) std::fill(delta_in.begin(), delta_in.end(), 0.0);
    for (std::size_t j = 0; j < f->out_dim; ++j) {
      const double dj = delta_out[j];
      if (dj == 0.0) continue;
      gb[j] += dj;
      double* gwr = gw + j * f->in_dim;
      for (std::size_t i = 0; i < f->in_dim; ++i) gwr[i] += dj * in[i];
      if (want_input) {
        const double* wr = w.data() + j * f->in_dim;
        for (std::size_t i = 0; i < f->in_dim; ++i) delta_in[i] += wr[i] * dj;
      }
    }
  } else if (const auto* c = std::get_if<Conv1D>(&l)) {
    const auto w = net.weights(d);
    double* gw = g.data() + p.weight_offset;
    double* gb = g.data() + p.bias_offset;
    const std::size_t k = c->kernel_width;
    if (want_input) std::fill(delta_in.begin(), delta_in.end(), 0.0);
    for (std::size_t oc = 0; oc < c->out_channels; ++oc) {
      for (std::size_t pos = 0; pos < p.out_len; ++pos) {
        const double dj = delta_out[oc * p.out_len + pos];
        if (dj == 0.0) continue;
        gb[oc] += dj;
        for (std::size_t ic = 0; ic < c->in_channels; ++ic) {
          const std::size_t base = ic * p.in_len + pos * c->stride;
          double* gwr = gw + (oc * c->in_channels + ic) * k;
          const double* wr = w.data() + (oc * c->in_channels + ic) * k;
          for (std::size_t t = 0; t < k; ++t) {
            gwr[t] += dj * in[base + t];
            if (want_input) delta_in[base + t] += wr[t] * dj;
          }
        }
      }
    }
  } else if (want_input) {
    for (std::size_t i = 0; i < p.in_size; ++i) {
      delta_in[i] = in[i] > 0.0 ? delta_out[i] : 0.0;
    }
  }
}

inline void check_input(const Net& net, std::size_t n) {
  if (n != net.input_dim()) {
    throw std::invalid_argument("input has length " + std::to_string(n) +
                                ", network expects " +
                                std::to_string(net.input_dim()));
  }
}

}  // namespace detail

/// Runs the network and leaves every intermediate activation in ws.
inline std::span<const double> forward(const Net& net, std::span<const double> x,
                                       Workspace& ws) {
  detail::check_input(net, x.size());
  const auto& plan = net.plan();
  ws.acts.resize(plan.size() + 1);
  ws.acts[0].assign(x.begin(), x.end());
  for (std::size_t d = 0; d < plan.size(); ++d) {
    ws.acts[d + 1].resize(plan[d].out_size);
    detail::layer_forward(net, d, ws.acts[d], ws.acts[d + 1]);
  }
  return ws.acts.back();
}

inline std::vector<double> forward(const Net& net, std::span<const double> x) {
  Workspace ws;
  const auto out = forward(net, x, ws);
  return {out.begin(), out.end()};
}

/// Forward pass on every row.
inline Matrix predict(const Net& net, const Matrix& inputs) {
  Matrix out(inputs.rows, net.output_dim());
  Workspace ws;
  for (std::size_t i = 0; i < inputs.rows; ++i) {
    const auto y = forward(net, inputs.row(i), ws);
    std::copy(y.begin(), y.end(), out.row(i).begin());
  }
  return out;
}

/// Mean absolute error over the output dimension.
inline double l1_loss(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size()) {
    throw std::invalid_argument("prediction has length " + std::to_string(pred.size()) +
                                ", truth has length " + std::to_string(truth.size()));
  }
  if (pred.empty()) throw std::invalid_argument("l1_loss of empty vectors");
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) acc += std::abs(pred[i] - truth[i]);
  return acc / static_cast<double>(pred.size());
}

/// Per-sample mean L1 losses of net over a dataset.
inline std::vector<double> sample_losses(const Net& net, const Dataset& data) {
  std::vector<double> losses(data.size());
  Workspace ws;
  for (std::size_t i = 0; i < data.size(); ++i) {
    losses[i] = l1_loss(forward(net, data.x(i), ws), data.y(i));
  }
  return losses;
}

inline double mean_loss(const Net& net, const Dataset& data) {
  const auto l = sample_losses(net, data);
  return std::accumulate(l.begin(), l.end(), 0.0) / static_cast<double>(l.size());
}

inline double sign0(double u) { return u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0); }

/// Adds the gradient of the batch-mean L1 loss over `rows` into g (which must
/// be zeroed by the caller) and returns the batch-mean loss.
inline double accumulate_gradient(const Net& net, const Dataset& data,
                                  std::span<const std::size_t> rows,
                                  std::span<double> g, Workspace& ws) {
  if (rows.empty()) throw std::invalid_argument("gradient of an empty batch");
  if (g.size() != net.parameter_count()) {
    throw std::invalid_argument("gradient buffer does not match parameter count");
  }
  if (data.targets.cols != net.output_dim()) {
    throw std::invalid_argument("targets have width " + std::to_string(data.targets.cols) +
                                ", network outputs " + std::to_string(net.output_dim()));
  }
  const std::size_t depth = net.plan().size();
  const double scale =
      1.0 / (static_cast<double>(rows.size()) * static_cast<double>(net.output_dim()));
  double loss = 0.0;
  for (const std::size_t r : rows) {
    const auto out = forward(net, data.x(r), ws);
    const auto y = data.y(r);
    ws.delta.resize(out.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
      const double u = out[j] - y[j];
      loss += std::abs(u);
      ws.delta[j] = sign0(u) * scale;
    }
    for (std::size_t d = depth; d-- > 0;) {
      ws.delta_prev.resize(d == 0 ? 0 : net.plan()[d].in_size);
      detail::layer_backward(net, d, ws.acts[d], ws.delta, ws.delta_prev, g);
      std::swap(ws.delta, ws.delta_prev);
    }
  }
  return loss * scale;
}

struct GradResult {
  double loss = 0.0;
  std::vector<double> grad;
};

/// Exact gradient of the mean L1 loss over the whole batch.
inline GradResult grad(const Net& net, const Dataset& batch) {
  if (batch.empty()) throw std::invalid_argument("gradient of an empty batch");
  std::vector<std::size_t> rows(batch.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  GradResult r;
  r.grad.assign(net.parameter_count(), 0.0);
  Workspace ws;
  r.loss = accumulate_gradient(net, batch, rows, r.grad, ws);
  return r;
}

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double learning_rate = 1e-3;

  static AdamState for_net(const Net& net, double lr = 1e-3) {
    AdamState s;
    s.m.assign(net.parameter_count(), 0.0);
    s.v.assign(net.parameter_count(), 0.0);
    s.learning_rate = lr;
    return s;
  }

  void reset() {
    std::fill(m.begin(), m.end(), 0.0);
    std::fill(v.begin(), v.end(), 0.0);
    t = 0;
  }
};

/// One bias-corrected Adam update, in place.
inline void adam_step(Net& net, std::span<const double> grads, AdamState& s) {
  auto theta = net.params();
  if (grads.size() != theta.size() || s.m.size() != theta.size() ||
      s.v.size() != theta.size()) {
    throw std::invalid_argument("Adam state and gradient must mirror the parameters");
  }
  ++s.t;
  const double t = static_cast<double>(s.t);
  const double c1 = 1.0 - std::pow(s.beta1, t);
  const double c2 = 1.0 - std::pow(s.beta2, t);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double g = grads[i];
    s.m[i] = s.beta1 * s.m[i] + (1.0 - s.beta1) * g;
    s.v[i] = s.beta2 * s.v[i] + (1.0 - s.beta2) * g * g;
    const double m_hat = s.m[i] / c1;
    const double v_hat = s.v[i] / c2;
    theta[i] -= s.learning_rate * m_hat / (std::sqrt(v_hat) + s.epsilon);
  }
}

struct TrainConfig {
  std::size_t minibatch_size = 32;
  double learning_rate = 1e-3;
  std::size_t max_epochs = 1000;
  std::size_t patience = 20;
  std::uint64_t seed = 0;
  bool operator==(const TrainConfig&) const = default;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  bool operator==(const EpochRecord&) const = default;
};

struct TrainLog {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;  // 0 = the starting parameters
  double best_val_loss = 0.0;
  std::uint64_t steps = 0;
  bool operator==(const TrainLog&) const = default;
};

struct TrainResult {
  Net net;
  TrainLog log;
};

/// Minibatch Adam over seeded shuffles with fresh optimizer state. Returns
/// the parameters with the lowest validation loss seen (the starting point
/// included); without a validation set the training loss is used instead.
inline TrainResult train(const Net& start, const Dataset& labeled, const Dataset& val,
                         const TrainConfig& cfg) {
  if (labeled.empty()) throw std::invalid_argument("cannot train on an empty labeled set");
  if (cfg.minibatch_size == 0) throw std::invalid_argument("minibatch size must be positive");
  TrainResult result{start, {}};
  if (cfg.max_epochs == 0) return result;

  const Dataset& monitor = val.empty() ? labeled : val;
  Net net = start;
  AdamState adam = AdamState::for_net(net, cfg.learning_rate);
  Rng rng(derive_seed(cfg.seed, "train_shuffle"));
  std::vector<std::size_t> order(labeled.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> g(net.parameter_count());
  Workspace ws;

  double best = mean_loss(net, monitor);
  result.log.best_val_loss = best;
  std::size_t since_best = 0;
  const std::size_t bs = std::min(cfg.minibatch_size, labeled.size());

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start_row = 0; start_row < order.size(); start_row += bs) {
      const std::size_t count = std::min(bs, order.size() - start_row);
      std::fill(g.begin(), g.end(), 0.0);
      const double l = accumulate_gradient(
          net, labeled, std::span(order).subspan(start_row, count), g, ws);
      epoch_loss += l * static_cast<double>(count);
      adam_step(net, g, adam);
      ++result.log.steps;
    }
    const double val_loss = mean_loss(net, monitor);
    result.log.epochs.push_back(
        {epoch, epoch_loss / static_cast<double>(order.size()), val_loss});
    if (val_loss < best) {
      best = val_loss;
      result.net = net;
      result.log.best_epoch = epoch;
      result.log.best_val_loss = best;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }
  return result;
}

/// Absolute weight sums of one parameterized layer. `per_output` is the
/// largest sum over the weights feeding a single output node; `per_input` is
/// the largest sum over the weights fed by a single input node.
struct WeightSums {
  std::size_t layer = 0;
  double per_output = 0.0;
  double per_input = 0.0;
  /// max(per_output, per_input): bounds the layer's l_q operator norm for
  /// every q >= 1 (l_1 needs per_input, l_inf per_output, the rest interpolate).
  double alpha() const { return std::max(per_output, per_input); }
};

inline std::vector<WeightSums> weight_sums(const Net& net) {
  std::vector<WeightSums> out;
  const auto& plan = net.plan();
  for (std::size_t d = 0; d < plan.size(); ++d) {
    if (!plan[d].parameterized()) continue;
    const auto w = net.weights(d);
    WeightSums s;
    s.layer = d;
    if (const auto* f = std::get_if<FullyConnected>(&net.spec().layers[d])) {
      std::vector<double> col(f->in_dim, 0.0);
      for (std::size_t j = 0; j < f->out_dim; ++j) {
        double row = 0.0;
        for (std::size_t i = 0; i < f->in_dim; ++i) {
          const double a = std::abs(w[j * f->in_dim + i]);
          row += a;
          col[i] += a;
        }
        s.per_output = std::max(s.per_output, row);
      }
      s.per_input = *std::max_element(col.begin(), col.end());
    } else {
      const auto& c = std::get<Conv1D>(net.spec().layers[d]);
      const std::size_t k = c.kernel_width;
      for (std::size_t oc = 0; oc < c.out_channels; ++oc) {
        double row = 0.0;
        for (std::size_t q = 0; q < c.in_channels * k; ++q) {
          row += std::abs(w[oc * c.in_channels * k + q]);
        }
        s.per_output = std::max(s.per_output, row);
      }
      // Input position l of channel ic feeds output position p through tap
      // t = l - p*stride whenever 0 <= t < k.
      const LayerPlan& p = plan[d];
      for (std::size_t ic = 0; ic < c.in_channels; ++ic) {
        for (std::size_t l = 0; l < p.in_len; ++l) {
          double col = 0.0;
          for (std::size_t pos = 0; pos < p.out_len; ++pos) {
            const std::size_t first = pos * c.stride;
            if (l < first || l - first >= k) continue;
            const std::size_t t = l - first;
            for (std::size_t oc = 0; oc < c.out_channels; ++oc) {
              col += std::abs(w[(oc * c.in_channels + ic) * k + t]);
            }
          }
          s.per_input = std::max(s.per_input, col);
        }
      }
    }
    out.push_back(s);
  }
  return out;
}

/// One alpha per parameterized layer, biases excluded.
inline std::vector<double> per_layer_weight_sums(const Net& net) {
  std::vector<double> alphas;
  for (const auto& s : weight_sums(net)) alphas.push_back(s.alpha());
  return alphas;
}

/// Number of convolutional and dense layers.
inline std::size_t parameterized_depth(const NetSpec& spec) {
  return static_cast<std::size_t>(std::count_if(
      spec.layers.begin(), spec.layers.end(),
      [](const LayerSpec& l) { return !std::holds_alternative<ReLU>(l); }));
}

}  // namespace alem::nn

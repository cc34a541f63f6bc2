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

// Synthetic simulators on the unit hypercube.
//
// SpectrumMix (10 inputs): three Gaussian lines over a decaying continuum,
//   y(t) = sum_m a_m exp(-(t - c_m)^2 / (2 w_m^2)) + b0 exp(-b1 t),  t in [0, 1].
// PowerCurve (5 inputs): a damped oscillating power law,
//   y(t) = s t^-p (1 + e sin(w t)),  t in [1, 10].
//
// Every shape parameter is an affine map of the input: lo + (hi - lo) * sum_k
// c_k u_k with c_k >= 0, sum_k c_k = 1, and u_k either x_k or 1 - x_k, so it
// always stays inside [lo, hi]. Outputs are clamped to [0, output_bound()].

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "alem/matrix.hpp"
#include "alem/rng.hpp"

namespace alem::oracle {

enum class OracleKind { SpectrumMix, PowerCurve };

inline const char* kind_name(OracleKind k) {
  return k == OracleKind::SpectrumMix ? "spectrum-mix" : "power-curve";
}

inline OracleKind parse_kind(const std::string& s) {
  if (s == "spectrum-mix" || s == "SpectrumMix") return OracleKind::SpectrumMix;
  if (s == "power-curve" || s == "PowerCurve") return OracleKind::PowerCurve;
  throw std::invalid_argument("unknown oracle kind '" + s +
                              "' (expected spectrum-mix or power-curve)");
}

inline std::size_t default_input_dim(OracleKind k) {
  return k == OracleKind::SpectrumMix ? 10 : 5;
}

struct OracleSpec {
  OracleKind kind = OracleKind::PowerCurve;
  std::size_t output_dim = 128;
  std::uint64_t coefficient_seed = 0;
  /// Additive Gaussian output noise; zero (off) by default.
  double noise_sigma = 0.0;

  std::size_t input_dim() const { return default_input_dim(kind); }
  bool operator==(const OracleSpec&) const = default;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct ParamMap {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> weights;
  std::vector<char> flipped;

  double operator()(std::span<const double> x) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      acc += weights[k] * (flipped[k] ? 1.0 - x[k] : x[k]);
    }
    return lo + (hi - lo) * acc;
  }

  /// |value(x) - value(x')| <= rate() * ||x - x'||_1
  double rate() const {
    return (hi - lo) * *std::max_element(weights.begin(), weights.end());
  }
};

class Oracle {
 public:
  explicit Oracle(OracleSpec spec) : spec_(spec) {
    if (spec_.output_dim < 2) throw std::invalid_argument("oracle output_dim must be at least 2");
    if (!(spec_.noise_sigma >= 0.0)) throw std::invalid_argument("noise sigma must be non-negative");
    Rng rng(derive_seed(spec_.coefficient_seed, "oracle_coefficients",
                        static_cast<std::uint64_t>(spec_.kind)));
    const std::size_t n = spec_.output_dim;
    grid_.resize(n);
    if (spec_.kind == OracleKind::SpectrumMix) {
      for (std::size_t j = 0; j < n; ++j) grid_[j] = static_cast<double>(j) / static_cast<double>(n - 1);
      for (int m = 0; m < 3; ++m) {
        const std::string s = std::to_string(m);
        maps_.push_back(make_map(rng, "amplitude_" + s, 0.2, 1.0));
        maps_.push_back(make_map(rng, "center_" + s, 0.05 + 0.3 * m, 0.35 + 0.3 * m));
        maps_.push_back(make_map(rng, "width_" + s, 0.02, 0.08));
      }
      maps_.push_back(make_map(rng, "continuum_level", 0.0, 0.3));
      maps_.push_back(make_map(rng, "continuum_decay", 0.0, 2.0));
      bound_ = 3.3;
    } else {
      for (std::size_t j = 0; j < n; ++j) grid_[j] = 1.0 + 9.0 * static_cast<double>(j) / static_cast<double>(n - 1);
      maps_.push_back(make_map(rng, "scale", 0.5, 1.5));
      maps_.push_back(make_map(rng, "exponent", 0.3, 1.5));
      maps_.push_back(make_map(rng, "ripple", 0.0, 0.3));
      maps_.push_back(make_map(rng, "frequency", 0.5, 3.0));
      bound_ = 2.0;
    }
  }

  const OracleSpec& spec() const { return spec_; }
  std::size_t input_dim() const { return spec_.input_dim(); }
  std::size_t output_dim() const { return spec_.output_dim; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<ParamMap>& parameter_maps() const { return maps_; }

  /// Every output component lies in [0, output_bound()].
  double output_bound() const { return bound_; }

  std::vector<double> query(std::span<const double> x) const {
    if (x.size() != input_dim()) {
      throw DomainError("oracle expects " + std::to_string(input_dim()) + " inputs, got " +
                        std::to_string(x.size()));
    }
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (!(x[k] >= 0.0 && x[k] <= 1.0)) {
        throw DomainError("input coordinate " + std::to_string(k) + " = " + std::to_string(x[k]) +
                          " is outside [0, 1]");
      }
    }
    std::vector<double> y(spec_.output_dim);
    if (spec_.kind == OracleKind::SpectrumMix) {
      double a[3], c[3], w[3];
      for (int m = 0; m < 3; ++m) {
        a[m] = maps_[3 * m](x);
        c[m] = maps_[3 * m + 1](x);
        w[m] = maps_[3 * m + 2](x);
      }
      const double level = maps_[9](x), decay = maps_[10](x);
      for (std::size_t j = 0; j < y.size(); ++j) {
        const double t = grid_[j];
        double v = level * std::exp(-decay * t);
        for (int m = 0; m < 3; ++m) {
          const double u = (t - c[m]) / w[m];
          v += a[m] * std::exp(-0.5 * u * u);
        }
        y[j] = v;
      }
    } else {
      const double s = maps_[0](x), p = maps_[1](x), e = maps_[2](x), w = maps_[3](x);
      for (std::size_t j = 0; j < y.size(); ++j) {
        const double t = grid_[j];
        y[j] = s * std::pow(t, -p) * (1.0 + e * std::sin(w * t));
      }
    }
    if (spec_.noise_sigma > 0.0) {
      std::uint64_t h = spec_.coefficient_seed;
      for (double v : x) h = splitmix64(h ^ std::bit_cast<std::uint64_t>(v));
      Rng rng(derive_seed(h, "oracle_noise"));
      for (double& v : y) v += spec_.noise_sigma * rng.normal();
    }
    for (double& v : y) v = std::clamp(v, 0.0, bound_);
    return y;
  }

  Matrix query_all(const Matrix& inputs) const {
    Matrix out(inputs.rows, output_dim());
    for (std::size_t i = 0; i < inputs.rows; ++i) {
      const auto y = query(inputs.row(i));
      std::copy(y.begin(), y.end(), out.row(i).begin());
    }
    return out;
  }

  /// Analytic constant K with ||y(x) - y(x')||_1 <= K ||x - x'||_1 (noise off),
  /// from sup |dy_j/dparam| over the parameter box times each map's rate.
  double lipschitz_bound() const {
    double total = 0.0;
    if (spec_.kind == OracleKind::SpectrumMix) {
      const double a_max = 1.0, w_min = 0.02, level_max = 0.3;
      const double d_amp = 1.0;                                   // exp(.) <= 1
      const double d_center = a_max / (w_min * std::sqrt(std::numbers::e));  // max u e^{-u^2/2}
      const double d_width = a_max * (2.0 / std::numbers::e) / w_min;        // max u^2 e^{-u^2/2}
      for (const double t : grid_) {
        double dj = 0.0;
        for (int m = 0; m < 3; ++m) {
          dj += d_amp * maps_[3 * m].rate() + d_center * maps_[3 * m + 1].rate() +
                d_width * maps_[3 * m + 2].rate();
        }
        dj += 1.0 * maps_[9].rate() + level_max * t * maps_[10].rate();
        total += dj;
      }
    } else {
      const double s_max = 1.5, p_min = 0.3, e_max = 0.3;
      for (const double t : grid_) {
        const double decay = std::pow(t, -p_min);
        const double dj = decay * (1.0 + e_max) * maps_[0].rate() +
                          s_max * std::log(t) * decay * (1.0 + e_max) * maps_[1].rate() +
                          s_max * decay * maps_[2].rate() +
                          s_max * decay * e_max * t * maps_[3].rate();
        total += dj;
      }
    }
    return total;
  }

  /// Coefficients as `key = value` lines.
  std::string dump_coefficients() const {
    std::ostringstream os;
    os.precision(17);
    os << "[oracle]\n"
       << "kind = " << kind_name(spec_.kind) << "\n"
       << "input_dim = " << input_dim() << "\n"
       << "output_dim = " << output_dim() << "\n"
       << "coefficient_seed = " << spec_.coefficient_seed << "\n"
       << "noise_sigma = " << spec_.noise_sigma << "\n"
       << "output_bound = " << bound_ << "\n"
       << "lipschitz_bound = " << lipschitz_bound() << "\n";
    for (const auto& m : maps_) {
      os << "\n[" << m.name << "]\n"
         << "lo = " << m.lo << "\nhi = " << m.hi << "\nweights =";
      for (double w : m.weights) os << ' ' << w;
      os << "\nflipped =";
      for (char f : m.flipped) os << ' ' << int(f);
      os << "\n";
    }
    return os.str();
  }

 private:
  ParamMap make_map(Rng& rng, std::string name, double lo, double hi) const {
    ParamMap m{std::move(name), lo, hi, {}, {}};
    const std::size_t d = input_dim();
    double sum = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double u = rng.uniform();
      m.weights.push_back(u * u);
      sum += u * u;
    }
    for (double& w : m.weights) w /= sum;
    for (std::size_t k = 0; k < d; ++k) m.flipped.push_back(rng.uniform() < 0.5 ? 1 : 0);
    return m;
  }

  OracleSpec spec_;
  std::vector<double> grid_;
  std::vector<ParamMap> maps_;
  double bound_ = 1.0;
};

/// n i.i.d. uniform points in [0, 1]^dim.
inline Matrix sample_pool(std::size_t dim, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("pool size must be at least 1");
  if (dim == 0) throw std::invalid_argument("input dimension must be at least 1");
  Matrix m(n, dim);
  Rng rng(derive_seed(seed, "sample_pool"));
  for (double& v : m.data) v = rng.uniform();
  return m;
}

inline Matrix sample_pool(const Oracle& o, std::size_t n, std::uint64_t seed) {
  return sample_pool(o.input_dim(), n, seed);
}

}  // namespace alem::oracle

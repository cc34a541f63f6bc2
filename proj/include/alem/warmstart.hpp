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

#include <cstdint>
#include <stdexcept>

#include "alem/nn.hpp"
#include "alem/rng.hpp"

namespace alem::warmstart {

struct SPConfig {
  double shrink = 0.5;  // lambda
  double sigma = 0.1;   // noise standard deviation
  std::uint64_t seed = 0;

  void validate() const {
    if (!(shrink >= 0.0 && shrink <= 1.0)) {
      throw std::invalid_argument("shrink factor must lie in [0, 1]");
    }
    if (!(sigma >= 0.0)) throw std::invalid_argument("noise sigma must be non-negative");
  }
  bool operator==(const SPConfig&) const = default;
};

/// theta <- shrink * theta + N(0, sigma^2) for every weight and bias, drawn
/// in parameter order from one seeded stream. Optimizer state is not
/// touched; callers start a fresh one.
inline nn::Net shrink_and_perturb(const nn::Net& net, const SPConfig& cfg) {
  cfg.validate();
  nn::Net out = net;
  Rng rng(derive_seed(cfg.seed, "shrink_perturb"));
  for (double& theta : out.params()) {
    theta *= cfg.shrink;
    if (cfg.sigma != 0.0) theta += cfg.sigma * rng.normal();
  }
  return out;
}

}  // namespace alem::warmstart
